//! Bessel resolvent kernels as Hahn series in the spectral parameter.

pub mod bounds;
pub mod cone;
pub mod kernel;
pub mod special;

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::{big_to_f64, parse_decimal, GeneratorEnclosure};

/// Order `nu >= 0` of a Bessel operator, exact or enclosed.
#[derive(Debug, Clone, PartialEq)]
pub enum Order {
    Rational(BigRational),
    Enclosure(GeneratorEnclosure),
}

impl Order {
    pub fn rational(q: BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Domain(format!("order {q} is negative")));
        }
        Ok(Order::Rational(q))
    }

    pub fn int(n: u32) -> Self {
        Order::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Result<Self> {
        Self::rational(BigRational::new(p.into(), q.into()))
    }

    pub fn enclosure(g: GeneratorEnclosure) -> Result<Self> {
        if g.is_declared_rational() {
            return Self::rational(g.midpoint().clone());
        }
        if g.lower().is_negative() {
            return Err(Error::Domain("order enclosure reaches below zero".into()));
        }
        Ok(Order::Enclosure(g))
    }

    /// `"1/2"`, `"2.5"`, `"pi"` or `"pi:20"` (digits of the enclosure).
    pub fn parse(s: &str, default_digits: usize) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("pi") {
            let digits = match rest.strip_prefix(':') {
                Some(d) => d.parse().map_err(|_| Error::Parse(s.to_string()))?,
                None if rest.is_empty() => default_digits,
                None => return Err(Error::Parse(s.to_string())),
            };
            return Self::enclosure(GeneratorEnclosure::pi(digits));
        }
        Self::rational(parse_decimal(t)?)
    }

    fn center(&self) -> &BigRational {
        match self {
            Order::Rational(q) => q,
            Order::Enclosure(g) => g.midpoint(),
        }
    }

    pub fn value(&self) -> f64 {
        big_to_f64(self.center())
    }

    /// `Some(n)` exactly when the order is the integer `n`.
    pub fn as_integer(&self) -> Option<u32> {
        match self {
            Order::Rational(q) if q.is_integer() => q.to_integer().to_u32(),
            _ => None,
        }
    }

    /// Floor and fractional part, the latter rounded only once.
    fn split(&self) -> (BigInt, f64) {
        let c = self.center();
        let fl = c.floor();
        (fl.to_integer(), big_to_f64(&(c - fl)))
    }

    /// `sin(nu pi)` from the exact fractional part.
    pub fn sin_pi(&self) -> f64 {
        let (fl, frac) = self.split();
        let s = (PI * frac).sin();
        if fl.is_odd() {
            -s
        } else {
            s
        }
    }

    /// `cos(nu pi)` from the exact fractional part.
    pub fn cos_pi(&self) -> f64 {
        let (fl, frac) = self.split();
        let c = (PI * frac).cos();
        if fl.is_odd() {
            -c
        } else {
            c
        }
    }

    /// The order as a generator of `2Z + 2 nu Z`.
    pub fn generator(&self) -> GeneratorEnclosure {
        match self {
            Order::Rational(q) => GeneratorEnclosure::rational(q.clone()),
            Order::Enclosure(g) => g.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Order::Rational(q) if q.is_zero())
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Rational(q) => write!(f, "{q}"),
            Order::Enclosure(g) => write!(f, "{}+-{}", big_to_f64(g.midpoint()), big_to_f64(g.radius())),
        }
    }
}
