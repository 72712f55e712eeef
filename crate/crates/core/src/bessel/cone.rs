//! Order families, kappa-suitability and mode-truncated cone kernels.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use statrs::function::gamma::ln_gamma;

use super::kernel::{resolvent_kernel_series, KernelExpansion};
use super::Order;
use crate::error::{Error, Result};
use crate::eval::{series_value, LogPoint};
use crate::exponent::{Exponent, GeneratorEnclosure};

/// Radius of the enclosure used for irrational square roots.
const SQRT_ENCLOSURE_RADIUS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum OrderFamily {
    /// Orders with multiplicities.
    ExplicitList(Vec<(Order, u64)>),
    /// Laplacian spectrum of the round `S^n`, modes `k = 0..=k_max`.
    SphereSpectrum { n: u32, k_max: u32 },
    /// `sqrt(q)` for `q = 0..=q_max`, each with multiplicity one.
    SqrtIntegers { q_max: u64 },
}

fn binomial(a: i64, b: i64) -> BigUint {
    if b < 0 || a < b {
        return BigUint::from(0u32);
    }
    let (a, b) = (a as u64, b as u64);
    (0..b).fold(BigUint::from(1u32), |acc, i| acc * (a - i) / (i + 1))
}

/// `(nu_k, m_k)` with `nu_k = (n-1)/2 + k` and `m_k = C(n+k, n) - C(n+k-2, n)`.
pub fn sphere_spectrum(n: u32, k_max: u32) -> Result<Vec<(Order, u64)>> {
    if n == 0 {
        return Err(Error::Domain("sphere dimension must be at least 1".into()));
    }
    let (n, k_max) = (n as i64, k_max as i64);
    (0..=k_max)
        .map(|k| {
            let m = binomial(n + k, n) - binomial(n + k - 2, n);
            let m = m.to_u64().ok_or_else(|| Error::Domain(format!("multiplicity overflow at k = {k}")))?;
            Ok((Order::ratio(n - 1 + 2 * k, 2)?, m))
        })
        .collect()
}

fn sqrt_order(q: u64) -> Result<Order> {
    let r = q.sqrt();
    if r * r == q {
        return Ok(Order::int(r as u32));
    }
    let mid = BigRational::from_f64((q as f64).sqrt()).ok_or_else(|| Error::Domain("sqrt out of range".into()))?;
    let rad = BigRational::from_f64(SQRT_ENCLOSURE_RADIUS).expect("finite");
    Order::enclosure(GeneratorEnclosure::new(mid, rad)?)
}

impl OrderFamily {
    pub fn orders(&self) -> Result<Vec<(Order, u64)>> {
        match self {
            OrderFamily::ExplicitList(v) => {
                if v.iter().any(|(_, m)| *m == 0) {
                    return Err(Error::Domain("multiplicities must be at least 1".into()));
                }
                Ok(v.clone())
            }
            OrderFamily::SphereSpectrum { n, k_max } => sphere_spectrum(*n, *k_max),
            OrderFamily::SqrtIntegers { q_max } => (0..=*q_max).map(|q| Ok((sqrt_order(q)?, 1))).collect(),
        }
    }
}

/// `|(2 kappa)^nu sin(nu pi) Gamma(nu+1)|^{-1}`, evaluated in logs.
pub fn suitability_quantity(nu: f64, sin_pi: f64, kappa: f64) -> f64 {
    (-nu * (2.0 * kappa).ln() - sin_pi.abs().ln() - ln_gamma(nu + 1.0)).exp()
}

/// `sin(pi sqrt(q))` from the fractional part of the root.
fn sin_pi_sqrt(q: u64) -> f64 {
    let r = (q as f64).sqrt();
    let n = q.sqrt();
    let s = (PI * (r - n as f64)).sin();
    if n % 2 == 1 {
        -s
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub checked: u64,
    pub gap_violations: u64,
    /// `max 1/((nu+1)|sin nu pi|)`, required `< 1`.
    pub max_first: f64,
    /// `max 1/(nu |sin nu pi|)`, required `< 3/2`.
    pub max_second: f64,
    pub bound_violations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuitabilityReport {
    pub kappa: f64,
    pub bound: f64,
    /// Number of non-integer orders examined.
    pub non_integer: u64,
    pub sup_observed: f64,
    pub pass: bool,
    /// Largest five `(nu, quantity)` pairs.
    pub witnesses: Vec<(f64, f64)>,
    pub gap: Option<GapReport>,
}

fn push_witness(w: &mut Vec<(f64, f64)>, nu: f64, v: f64) {
    if w.len() == 5 && v <= w[4].1 {
        return;
    }
    let pos = w.partition_point(|e| e.1 >= v);
    w.insert(pos, (nu, v));
    w.truncate(5);
}

/// Whether `4(n+1)^2 q` lies strictly between the squared gap endpoints.
pub fn gap_inequality(q: u64) -> bool {
    let n = q.sqrt() as u128;
    let q = q as u128;
    let m = n + 1;
    let lhs = 4 * m * m * q;
    let low = 2 * n * m + 1;
    let high = 2 * m * m - 1;
    lhs > low * low && lhs < high * high
}

pub fn kappa_suitable(family: &OrderFamily, kappa: f64, bound: f64) -> Result<SuitabilityReport> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    let mut witnesses = Vec::new();
    let mut sup: f64 = 0.0;
    let mut count = 0u64;
    let mut gap = None;
    match family {
        OrderFamily::SqrtIntegers { q_max } => {
            let mut g = GapReport { checked: 0, gap_violations: 0, max_first: 0.0, max_second: 0.0, bound_violations: 0 };
            for q in 0..=*q_max {
                let n = q.sqrt();
                if n * n == q {
                    continue;
                }
                let nu = (q as f64).sqrt();
                let s = sin_pi_sqrt(q);
                let v = suitability_quantity(nu, s, kappa);
                count += 1;
                sup = sup.max(v);
                push_witness(&mut witnesses, nu, v);
                g.checked += 1;
                if !gap_inequality(q) {
                    g.gap_violations += 1;
                }
                let first = 1.0 / ((nu + 1.0) * s.abs());
                let second = 1.0 / (nu * s.abs());
                g.max_first = g.max_first.max(first);
                g.max_second = g.max_second.max(second);
                if !(first < 1.0 && second < 1.5) {
                    g.bound_violations += 1;
                }
            }
            gap = Some(g);
        }
        _ => {
            for (nu, _) in family.orders()? {
                if nu.as_integer().is_some() {
                    continue;
                }
                let v = suitability_quantity(nu.value(), nu.sin_pi(), kappa);
                count += 1;
                sup = sup.max(v);
                push_witness(&mut witnesses, nu.value(), v);
            }
        }
    }
    let gap_ok = gap.as_ref().is_none_or(|g| g.gap_violations == 0 && g.bound_violations == 0);
    Ok(SuitabilityReport {
        kappa,
        bound,
        non_integer: count,
        sup_observed: sup,
        pass: sup.is_finite() && sup <= bound && gap_ok,
        witnesses,
        gap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub multiplicity: u64,
    pub expansion: KernelExpansion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    /// Distinct `(alpha, beta)` over all modes, sorted numerically.
    pub exponents: Vec<(f64, i64)>,
    /// Exponents below zero in their mode's group.
    pub negative: Vec<Exponent>,
    pub holomorphic: bool,
    /// Negative exponents are exactly `(0, -1)` and appear only if `nu = 0` is present.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeKernel {
    pub modes: Vec<Mode>,
    pub support: SupportReport,
}

pub fn cone_kernel_modes(family: &OrderFamily, x: f64, y: f64, terms: usize) -> Result<ConeKernel> {
    let mut modes = Vec::new();
    for (nu, m) in family.orders()? {
        modes.push(Mode { multiplicity: m, expansion: resolvent_kernel_series(&nu, x, y, terms)? });
    }
    let mut exponents = Vec::new();
    let mut negative = Vec::new();
    for mode in &modes {
        let s = &mode.expansion.series;
        let g = s.group();
        for (e, _) in s.terms() {
            exponents.push((g.alpha_f64(e), e.log));
            if g.sign(e)? == Ordering::Less && !negative.contains(e) {
                negative.push(*e);
            }
        }
    }
    exponents.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    exponents.dedup();
    let has_zero = modes.iter().any(|m| m.expansion.nu.is_zero());
    let pole = Exponent::int_pair(0, -1);
    let consistent = if has_zero { negative == [pole] } else { negative.is_empty() };
    let holomorphic = negative.is_empty();
    Ok(ConeKernel { modes, support: SupportReport { exponents, negative, holomorphic, consistent } })
}

/// `sum_{|k| <= k_max} r^{(|k|)}(x, y)(lambda) e^{ik(theta - theta')} / (2 pi)` on the circle.
pub fn circle_kernel_pointwise(x: f64, y: f64, theta: f64, theta_prime: f64, lambda: &LogPoint, k_max: u32, terms: usize) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=k_max {
        let r = series_value(&resolvent_kernel_series(&Order::int(k), x, y, terms)?.series, lambda)?;
        let angle = k as f64 * (theta - theta_prime);
        let phase = if k == 0 { 1.0 } else { 2.0 * angle.cos() };
        sum += r * phase;
    }
    Ok(sum / (2.0 * PI))
}
