//! Resolvent kernel `r(x, y)(lambda) = (i pi / 2) sqrt(xy) J_nu(lambda min) H1_nu(lambda max)`
//! as a Hahn series in `lambda`.
//!
//! Non-integer orders split as `(i pi / 2)(lambda^{2 nu} f1 + f2)` with even
//! entire `f1`, `f2`. Integer orders `n` give `log(lambda) g1 + g2`, where
//! `lambda^{2k} log(lambda) = -e_(2k,-1)`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::special::{self, digamma_int, h_coeffs, h_coeffs_negative, ln_gamma_fn, NEAR_INTEGER_GUARD};
use super::Order;
use crate::error::{Error, Result};
use crate::eval::LogPoint;
use crate::exponent::{Exponent, ExponentGroup, Q};
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    NonInteger,
    Integer,
    /// `nu = 0`: the expansion carries `e_(0,-1)`, so it is meromorphic.
    NuZeroMeromorphic,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::NonInteger => "NonInteger",
            Branch::Integer => "Integer",
            Branch::NuZeroMeromorphic => "NuZeroMeromorphic",
        }
    }
}

/// Taylor coefficients in `lambda^2` of the entire pieces.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelParts {
    /// `-(2i/pi) r = lambda^{2 nu} f1 + f2`.
    NonInteger { f1: Vec<Complex64>, f2: Vec<Complex64> },
    /// `r = log(lambda) g1 + g2`.
    Integer { g1: Vec<Complex64>, g2: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelExpansion {
    pub nu: Order,
    /// `x <= y` after symmetrization.
    pub x: f64,
    pub y: f64,
    pub series: Series<Complex64>,
    pub branch: Branch,
    pub terms: usize,
    pub parts: KernelParts,
}

fn i() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

/// Product of two coefficient lists, truncated to `n` entries.
fn poly_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, aj) in a.iter().enumerate().take(n) {
        for (k, bk) in b.iter().enumerate().take(n - j) {
            out[j + k] += aj * bk;
        }
    }
    out
}

/// `a_k s^{2k}` as complex coefficients of `h(lambda s)` in `lambda^2`.
fn scaled(a: &[f64], s: f64) -> Vec<Complex64> {
    let s2 = s * s;
    let mut p = 1.0;
    a.iter()
        .map(|ak| {
            let v = Complex64::new(ak * p, 0.0);
            p *= s2;
            v
        })
        .collect()
}

pub(crate) fn ordered(x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("kernel arguments must be positive, got ({x}, {y})")));
    }
    Ok(if x <= y { (x, y) } else { (y, x) })
}

/// Precomputed order-dependent data; evaluating the parts at `(x, y)` is then cheap.
#[derive(Debug, Clone)]
pub(crate) enum PartsPlan {
    NonInteger { nu: f64, sin: f64, cos: f64, a: Vec<f64>, am: Vec<f64> },
    Integer { n: u32, a: Vec<f64>, s1: Vec<f64>, s2: Vec<f64> },
}

impl PartsPlan {
    pub(crate) fn new(nu: &Order, terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::Domain("at least one term per part is required".into()));
        }
        let a = h_coeffs(nu, terms - 1)?;
        let Some(n) = nu.as_integer() else {
            let sin = nu.sin_pi();
            if sin.abs() < NEAR_INTEGER_GUARD {
                return Err(Error::NearIntegerOrder { nu: nu.value(), guard: NEAR_INTEGER_GUARD });
            }
            let am = h_coeffs_negative(nu, terms - 1)?;
            return Ok(PartsPlan::NonInteger { nu: nu.value(), sin, cos: nu.cos_pi(), a, am });
        };
        let nn = n as usize;
        // (n-k-1)!/k! and (psi(k+1) + psi(n+k+1)) (-1)^k / (k! (n+k)!), without powers of y
        let mut s1 = Vec::with_capacity(nn);
        for k in 0..nn {
            s1.push((ln_gamma_fn((nn - k) as f64)? - ln_gamma_fn(k as f64 + 1.0)?).exp());
        }
        let mut s2 = Vec::with_capacity(terms);
        let mut inv_fact = (-ln_gamma_fn(n as f64 + 1.0)?).exp();
        for k in 0..terms {
            if k > 0 {
                inv_fact /= -(k as f64) * (nn + k) as f64;
            }
            s2.push((digamma_int(k as u32 + 1)? + digamma_int(n + k as u32 + 1)?) * inv_fact);
        }
        Ok(PartsPlan::Integer { n, a, s1, s2 })
    }

    pub(crate) fn terms(&self) -> usize {
        match self {
            PartsPlan::NonInteger { a, .. } | PartsPlan::Integer { a, .. } => a.len(),
        }
    }

    /// Parts at `x <= y`.
    pub(crate) fn parts(&self, x: f64, y: f64) -> KernelParts {
        let terms = self.terms();
        match self {
            PartsPlan::NonInteger { nu, sin, cos, a, am } => {
                let hx = scaled(a, x);
                let p1 = poly_mul(&hx, &scaled(a, y), terms);
                let p2 = poly_mul(&hx, &scaled(am, y), terms);
                // i e^{-i nu pi} / (4^nu sin nu pi) (xy)^{nu + 1/2}
                let c1 = Complex64::new(*sin, *cos) / (4f64.powf(*nu) * sin) * (x * y).powf(nu + 0.5);
                let c2 = Complex64::new(0.0, -1.0 / sin) * (x * y).sqrt() * (x / y).powf(*nu);
                KernelParts::NonInteger {
                    f1: p1.iter().map(|p| c1 * p).collect(),
                    f2: p2.iter().map(|p| c2 * p).collect(),
                }
            }
            PartsPlan::Integer { n, a, s1, s2 } => {
                let nn = *n as usize;
                let hx = scaled(a, x);
                let p = poly_mul(&hx, &scaled(a, y), terms);
                let q = (x * y / 4.0).powi(*n as i32);
                let mut jj = vec![Complex64::new(0.0, 0.0); terms];
                for m in nn..terms {
                    jj[m] = p[m - nn] * q;
                }
                let t1 = poly_mul(&hx, &scaled(s1, y / 2.0), terms);
                let t2 = poly_mul(&hx, &scaled(s2, y / 2.0), terms);

                let sq = (x * y).sqrt();
                let log_coeff = Complex64::new(1.0, 2.0 / PI * (y / 2.0).ln());
                let ratio_n = (x / y).powi(*n as i32);
                let pre = i() * (PI / 2.0) * sq;
                let mut g1 = Vec::with_capacity(terms);
                let mut g2 = Vec::with_capacity(terms);
                for m in 0..terms {
                    g1.push(-sq * jj[m]);
                    let mut bracket = log_coeff * jj[m] - i() / PI * ratio_n * t1[m];
                    if m >= nn {
                        bracket -= i() / PI * q * t2[m - nn];
                    }
                    g2.push(pre * bracket);
                }
                KernelParts::Integer { g1, g2 }
            }
        }
    }
}

pub fn resolvent_kernel_series(nu: &Order, x: f64, y: f64, terms: usize) -> Result<KernelExpansion> {
    let (x, y) = ordered(x, y)?;
    let plan = PartsPlan::new(nu, terms)?;
    let parts = plan.parts(x, y);
    let mut series_terms = Vec::with_capacity(2 * terms);
    let (series, branch) = match (&parts, nu.as_integer()) {
        (KernelParts::NonInteger { f1, f2 }, _) => {
            let pre = i() * (PI / 2.0);
            for k in 0..terms {
                let two_k = Q::from_integer(2 * k as i64);
                series_terms.push((Exponent::rational(two_k), pre * f2[k]));
                series_terms.push((Exponent::with_generator(two_k, Q::from_integer(2)), pre * f1[k]));
            }
            let group = ExponentGroup::RationalPlusGenerator(nu.generator());
            (Series::new(group, series_terms, Some(Exponent::int(2 * terms as i64)))?, Branch::NonInteger)
        }
        (KernelParts::Integer { g1, g2 }, n) => {
            for m in 0..terms {
                let two_m = 2 * m as i64;
                series_terms.push((Exponent::int_pair(two_m, 0), g2[m]));
                series_terms.push((Exponent::int_pair(two_m, -1), -g1[m]));
            }
            let valid = Some(Exponent::int_pair(2 * terms as i64, -1));
            let branch = if n == Some(0) { Branch::NuZeroMeromorphic } else { Branch::Integer };
            (Series::new(ExponentGroup::lex_integers(), series_terms, valid)?, branch)
        }
    };
    Ok(KernelExpansion { nu: nu.clone(), x, y, series, branch, terms, parts })
}

fn scale_point(lambda: &LogPoint, s: f64) -> LogPoint {
    LogPoint { r: lambda.r * s, phi: lambda.phi }
}

/// Kernel value from the Bessel and Hankel oracles, with cover-aware powers.
pub fn resolvent_kernel_direct(nu: &Order, lambda: &LogPoint, x: f64, y: f64) -> Result<Complex64> {
    let (x, y) = ordered(x, y)?;
    let j = special::bessel_j(nu, &scale_point(lambda, x))?;
    let h = special::hankel_h1(nu, &scale_point(lambda, y))?;
    Ok(i() * (PI / 2.0) * (x * y).sqrt() * j * h)
}

fn binomial(m: u64, j: u64) -> f64 {
    (0..j).fold(1.0, |acc, t| acc * (m - t) as f64 / (t + 1) as f64)
}

/// Re-expands `f(lambda e^{2 pi i t})` on the original sheet: powers pick up
/// `e^{2 pi i alpha t}` and `-log lambda` shifts by `-2 pi i t`.
pub fn monodromy(f: &Series<Complex64>, turns: i64) -> Result<Series<Complex64>> {
    let g = f.group();
    if g.beta_denominator() != 1 {
        return Err(Error::Domain("monodromy needs integer log powers".into()));
    }
    let t = turns as f64;
    let shift = Complex64::new(0.0, -2.0 * PI * t);
    let mut out = Vec::new();
    for (e, c) in f.terms() {
        if e.log > 0 {
            return Err(Error::Domain(format!("negative log power at {e}")));
        }
        let phase = Complex64::from_polar(1.0, 2.0 * PI * g.alpha_f64(e) * t);
        let m = (-e.log) as u64;
        for j in 0..=m {
            let w = shift.powu((m - j) as u32) * binomial(m, j);
            out.push((Exponent::pair(e.alpha(), -(j as i64)), c * phase * w));
        }
    }
    Series::new(g.clone(), out, f.valid_below().copied())
}

impl KernelExpansion {
    /// Checks the parity structure of the support: first components are even
    /// integers, shifted by `2 nu` on the non-integer branch; log terms sit at
    /// `(2k, -1)` with `k >= n` only.
    pub fn support_is_even(&self) -> bool {
        let even = |q: &Q| q.is_integer() && q.to_integer() % 2 == 0;
        match self.branch {
            Branch::NonInteger => {
                // rational orders have the generator folded into the first component
                let two_nu = match &self.nu {
                    Order::Rational(q) => {
                        let t = q * num_bigint::BigInt::from(2);
                        match (t.numer().to_i64(), t.denom().to_i64()) {
                            (Some(a), Some(b)) => Some(Q::new(a, b)),
                            _ => return false,
                        }
                    }
                    Order::Enclosure(_) => None,
                };
                self.series.terms().iter().all(|(e, _)| {
                    let shifted = |g: i64| e.gen == Q::from_integer(g) && even(&e.re);
                    e.log == 0
                        && (shifted(0)
                            || shifted(2)
                            || two_nu.is_some_and(|t| e.gen == Q::from_integer(0) && even(&(e.re - t))))
                })
            }
            Branch::Integer | Branch::NuZeroMeromorphic => {
                let n = self.nu.as_integer().unwrap_or(0) as i64;
                self.series.terms().iter().all(|(e, _)| {
                    even(&e.re)
                        && e.gen == Q::from_integer(0)
                        && (e.log == 0 || (e.log == -1 && e.re.to_integer() >= 2 * n))
                })
            }
        }
    }

    /// Taylor coefficient of `f_j` (non-integer) or `g_j` (integer) at `lambda^{2k}`.
    pub fn part_coefficient(&self, j: usize, k: usize) -> Option<Complex64> {
        let list = match (&self.parts, j) {
            (KernelParts::NonInteger { f1, .. }, 1) => f1,
            (KernelParts::NonInteger { f2, .. }, 2) => f2,
            (KernelParts::Integer { g1, .. }, 1) => g1,
            (KernelParts::Integer { g2, .. }, 2) => g2,
            _ => return None,
        };
        list.get(k).copied()
    }
}

/// `-sqrt(xy) log(lambda y / 2)` reference for the leading behavior at `nu = 0`.
pub fn nu_zero_leading(lambda: &LogPoint, x: f64, y: f64) -> Complex64 {
    -(x * y).sqrt() * (lambda.log() + (y.ln() - LN_2))
}
