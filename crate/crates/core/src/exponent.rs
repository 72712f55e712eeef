//! Exponents in ordered abelian groups.
//!
//! Three group shapes are supported: the rationals, rationals extended by a
//! single real generator `g` known through an enclosure, and lexicographic
//! pairs `(alpha, beta)` whose first component lives in one of the former and
//! whose second component is an integer multiple of `1 / beta_denominator`.
//! The pair `(alpha, beta)` stands for the basis function
//! `z^alpha (-log z)^(-beta)`.
//!
//! All exponents share one coordinate layout, `re + gen * g` for the first
//! component and `log / beta_denominator` for the second, so that group
//! operations never need the group itself. Ordering does, because comparing
//! `a + b g` against `c + d g` with `b != d` depends on where `g` is.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = Rational64;

/// Parses `"-12.5e-3"`, `"7"`, `"3/4"` into an exact big rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| Error::Parse(s.to_string()))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(s.to_string()));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(s.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
    if neg {
        num = -num;
    }
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Parses a small rational (`"1/2"`, `"-3"`, `"0.25"`) into exponent precision.
pub fn parse_rational(s: &str) -> Result<Q> {
    let big = parse_decimal(s)?;
    let (n, d) = (big.numer().to_i64(), big.denom().to_i64());
    match (n, d) {
        (Some(n), Some(d)) => Ok(Q::new(n, d)),
        _ => Err(Error::Parse(format!("{s} does not fit exponent precision"))),
    }
}

fn q_to_big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// A real generator known through a closed enclosure `[mid - rad, mid + rad]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorEnclosure {
    midpoint: BigRational,
    radius: BigRational,
    declared_rational: bool,
}

impl GeneratorEnclosure {
    pub fn new(midpoint: BigRational, radius: BigRational) -> Result<Self> {
        if radius.is_negative() {
            return Err(Error::Domain("enclosure radius must be non-negative".into()));
        }
        Ok(Self { midpoint, radius, declared_rational: false })
    }

    /// A generator that is exactly the given rational.
    pub fn rational(value: BigRational) -> Self {
        Self { midpoint: value, radius: BigRational::zero(), declared_rational: true }
    }

    pub fn from_decimals(midpoint: &str, radius: &str) -> Result<Self> {
        Self::new(parse_decimal(midpoint)?, parse_decimal(radius)?)
    }

    /// Enclosure of pi to the given number of decimal digits (at most 30).
    pub fn pi(digits: usize) -> Self {
        const PI: &str = "3.141592653589793238462643383279";
        let digits = digits.clamp(1, 30);
        let mid = parse_decimal(&PI[..digits + 2]).expect("pi literal");
        let rad = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10u8), digits));
        Self { midpoint: mid, radius: rad, declared_rational: false }
    }

    pub fn midpoint(&self) -> &BigRational {
        &self.midpoint
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn is_declared_rational(&self) -> bool {
        self.declared_rational
    }

    pub fn value_f64(&self) -> f64 {
        big_to_f64(&self.midpoint)
    }

    pub fn lower(&self) -> BigRational {
        &self.midpoint - &self.radius
    }

    pub fn upper(&self) -> BigRational {
        &self.midpoint + &self.radius
    }

    /// Sign of `g - t`, or `UndecidableComparison` when `t` lies in the enclosure.
    pub fn compare_to(&self, t: &BigRational) -> Result<Ordering> {
        if self.declared_rational {
            return Ok(self.midpoint.cmp(t));
        }
        if *t < self.lower() {
            Ok(Ordering::Greater)
        } else if *t > self.upper() {
            Ok(Ordering::Less)
        } else {
            Err(Error::UndecidableComparison { threshold: t.to_string() })
        }
    }
}

pub(crate) fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// First-component group of a lexicographic pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LineGroup {
    RationalLine,
    RationalPlusGenerator(GeneratorEnclosure),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExponentGroup {
    RationalLine,
    RationalPlusGenerator(GeneratorEnclosure),
    /// Lexicographic pairs; `beta_denominator` rescales a rational second
    /// component onto the integers (1 for `Z x Z`).
    LexPair { first: LineGroup, beta_denominator: i64 },
}

/// Coordinates `(re + gen * g, log / beta_denominator)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub re: Q,
    pub gen: Q,
    pub log: i64,
}

impl Exponent {
    pub fn zero() -> Self {
        Self { re: Q::zero(), gen: Q::zero(), log: 0 }
    }

    pub fn rational(re: Q) -> Self {
        Self { re, gen: Q::zero(), log: 0 }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Q::from_integer(n))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::rational(Q::new(p, q))
    }

    /// `a + b g` in a generator group.
    pub fn with_generator(a: Q, b: Q) -> Self {
        Self { re: a, gen: b, log: 0 }
    }

    /// Lexicographic pair with first component `alpha` and raw second coordinate `log`.
    pub fn pair(alpha: Exponent, log: i64) -> Self {
        Self { re: alpha.re, gen: alpha.gen, log }
    }

    /// Integer pair `(alpha, beta)`.
    pub fn int_pair(alpha: i64, beta: i64) -> Self {
        Self { re: Q::from_integer(alpha), gen: Q::zero(), log: beta }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.gen.is_zero() && self.log == 0
    }

    /// First component with the log coordinate dropped.
    pub fn alpha(&self) -> Exponent {
        Self { re: self.re, gen: self.gen, log: 0 }
    }

    pub fn int_scale(&self, n: i64) -> Self {
        Self { re: self.re * n, gen: self.gen * n, log: self.log * n }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent { re: self.re + o.re, gen: self.gen + o.gen, log: self.log + o.log }
    }
}

impl Add for &Exponent {
    type Output = Exponent;
    fn add(self, o: &Exponent) -> Exponent {
        *self + *o
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        self + (-o)
    }
}

impl Sub for &Exponent {
    type Output = Exponent;
    fn sub(self, o: &Exponent) -> Exponent {
        *self - *o
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent { re: -self.re, gen: -self.gen, log: -self.log }
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        -*self
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alpha = match (self.re.is_zero(), self.gen.is_zero()) {
            (_, true) => format!("{}", self.re),
            (true, false) => format!("{}g", self.gen),
            (false, false) => format!("{}+{}g", self.re, self.gen),
        };
        if self.log == 0 {
            write!(f, "{alpha}")
        } else {
            write!(f, "({alpha},{})", self.log)
        }
    }
}

impl LineGroup {
    fn generator(&self) -> Option<&GeneratorEnclosure> {
        match self {
            LineGroup::RationalLine => None,
            LineGroup::RationalPlusGenerator(g) => Some(g),
        }
    }
}

impl ExponentGroup {
    /// `Z x Z` with rational first component, the group of `z log z` series.
    pub fn lex_integers() -> Self {
        ExponentGroup::LexPair { first: LineGroup::RationalLine, beta_denominator: 1 }
    }

    pub fn generator(&self) -> Option<&GeneratorEnclosure> {
        match self {
            ExponentGroup::RationalLine => None,
            ExponentGroup::RationalPlusGenerator(g) => Some(g),
            ExponentGroup::LexPair { first, .. } => first.generator(),
        }
    }

    pub fn has_logs(&self) -> bool {
        matches!(self, ExponentGroup::LexPair { .. })
    }

    pub fn beta_denominator(&self) -> i64 {
        match self {
            ExponentGroup::LexPair { beta_denominator, .. } => *beta_denominator,
            _ => 1,
        }
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        match self {
            ExponentGroup::RationalLine => e.gen.is_zero() && e.log == 0,
            ExponentGroup::RationalPlusGenerator(_) => e.log == 0,
            ExponentGroup::LexPair { first, .. } => match first {
                LineGroup::RationalLine => e.gen.is_zero(),
                LineGroup::RationalPlusGenerator(_) => true,
            },
        }
    }

    /// Folds `b g` into the rational part when the generator is declared rational.
    pub fn normalize(&self, e: Exponent) -> Exponent {
        match self.generator() {
            Some(g) if g.is_declared_rational() && !e.gen.is_zero() => {
                let folded = q_to_big(&e.re) + q_to_big(&e.gen) * g.midpoint();
                let re = match (folded.numer().to_i64(), folded.denom().to_i64()) {
                    (Some(n), Some(d)) => Q::new(n, d),
                    _ => return e,
                };
                Exponent { re, gen: Q::zero(), log: e.log }
            }
            _ => e,
        }
    }

    pub fn check(&self, e: &Exponent) -> Result<Exponent> {
        if !self.contains(e) {
            return Err(Error::NotInGroup(e.to_string()));
        }
        Ok(self.normalize(*e))
    }

    fn compare_alpha(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        if a.gen == b.gen {
            return Ok(a.re.cmp(&b.re));
        }
        let g = self.generator().ok_or_else(|| Error::NotInGroup(format!("{a} vs {b}")))?;
        // a - b = (a.re - b.re) + (a.gen - b.gen) g, sign decided against t = (b.re - a.re) / db
        let db = a.gen - b.gen;
        let t = q_to_big(&((b.re - a.re) / db));
        let g_vs_t = g.compare_to(&t)?;
        Ok(if db.is_positive() { g_vs_t } else { g_vs_t.reverse() })
    }

    /// Total order on decidable inputs; lexicographic for pairs.
    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        match self.compare_alpha(a, b)? {
            Ordering::Equal => Ok(a.log.cmp(&b.log)),
            ord => Ok(ord),
        }
    }

    pub fn min<'a>(&self, a: &'a Exponent, b: &'a Exponent) -> Result<&'a Exponent> {
        Ok(if self.compare(a, b)? == Ordering::Greater { b } else { a })
    }

    pub fn sign(&self, e: &Exponent) -> Result<Ordering> {
        self.compare(e, &Exponent::zero())
    }

    pub fn is_positive(&self, e: &Exponent) -> Result<bool> {
        Ok(self.sign(e)? == Ordering::Greater)
    }

    /// Real value of the first component, using the enclosure midpoint.
    pub fn alpha_f64(&self, e: &Exponent) -> f64 {
        let g = self.generator().map_or(0.0, GeneratorEnclosure::value_f64);
        q_to_f64(&e.re) + q_to_f64(&e.gen) * g
    }

    /// Real value of the second component.
    pub fn beta_f64(&self, e: &Exponent) -> f64 {
        e.log as f64 / self.beta_denominator() as f64
    }
}

/// Least `N >= 0` with `-beta <= N alpha` over a finite positive support.
pub fn star_bound(group: &ExponentGroup, support: &[Exponent]) -> Result<u64> {
    let den = group.beta_denominator();
    let mut bound = 0u64;
    for e in support {
        if !group.is_positive(e)? {
            return Err(Error::NotAdmissible(format!("{e} is not positive")));
        }
        if e.log >= 0 {
            continue;
        }
        let alpha = e.alpha();
        if group.sign(&alpha)? != Ordering::Greater {
            return Err(Error::NotAdmissible(format!("{e} has a log factor without a power")));
        }
        // -log / den <= N alpha  <=>  N den alpha >= -log
        let target = Exponent::int(-e.log);
        let guess = (-(e.log as f64) / (den as f64 * group.alpha_f64(&alpha))).floor();
        let mut n = if guess.is_finite() && guess > 1.0 { guess as u64 - 1 } else { 0 };
        while group.compare(&alpha.int_scale(n as i64 * den), &target)? == Ordering::Less {
            n += 1;
        }
        bound = bound.max(n);
    }
    Ok(bound)
}

/// Least common multiple helper used when merging pair groups.
pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}
