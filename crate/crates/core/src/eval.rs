//! Evaluation on the logarithmic cover.
//!
//! A point is `(r, phi)` with `phi` unbounded; `log z = ln r + i phi` is never
//! reduced modulo `2 pi`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentGroup};
use crate::meromorphic::Meromorphic;
use crate::series::Series;

pub const DEFAULT_NODES_PER_TURN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPoint {
    pub r: f64,
    pub phi: f64,
}

impl LogPoint {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite() && phi.is_finite()) {
            return Err(Error::Domain(format!("invalid cover point ({r}, {phi})")));
        }
        Ok(Self { r, phi })
    }

    /// `log z` on the cover.
    pub fn log(&self) -> Complex64 {
        Complex64::new(self.r.ln(), self.phi)
    }

    /// Image in the plane.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.phi)
    }

    /// `z^s` on the cover.
    pub fn pow(&self, s: f64) -> Complex64 {
        (self.log() * s).exp()
    }
}

/// `{0 < |z| < radius, |arg z| < sigma}`; `sigma = None` is the whole cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorDisc {
    pub radius: f64,
    pub sigma: Option<f64>,
}

impl SectorDisc {
    pub fn contains(&self, p: &LogPoint) -> bool {
        p.r < self.radius && self.sigma.is_none_or(|s| p.phi.abs() < s)
    }
}

/// `z^alpha (-log z)^(-beta)` at `p`.
pub fn basis_eval(group: &ExponentGroup, e: &Exponent, p: &LogPoint) -> Result<Complex64> {
    let alpha = group.alpha_f64(e);
    let beta = group.beta_f64(e);
    let power = p.pow(alpha);
    if beta == 0.0 {
        return Ok(power);
    }
    if p.r >= 1.0 {
        return Err(Error::BranchCutHit { r: p.r, phi: p.phi });
    }
    let minus_log = -p.log();
    Ok(power * (minus_log.ln() * -beta).exp())
}

/// Bound on the omitted part of a series at a point.
#[derive(Debug, Clone, PartialEq)]
pub enum TailModel {
    /// No bound: the value is the truncated sum only.
    TruncationOnly,
    /// Majorant coefficients `|a_gamma| <= bound` for omitted exponents.
    Terms(Vec<(Exponent, f64)>),
    /// `sum_{j >= 0} first * ratio^j`.
    Geometric { first: f64, ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub residual_bound: f64,
    pub truncation_only: bool,
}

fn tail_bound(group: &ExponentGroup, tail: &TailModel, p: &LogPoint) -> Result<f64> {
    Ok(match tail {
        TailModel::TruncationOnly => 0.0,
        TailModel::Terms(ts) => {
            let mut acc = 0.0;
            for (e, b) in ts {
                acc += b * basis_eval(group, e, p)?.norm();
            }
            acc
        }
        TailModel::Geometric { first, ratio } => {
            if *ratio < 1.0 {
                first / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        }
    })
}

/// Truncated sum `sum a_gamma e_gamma(p)`.
pub fn series_value<C: Scalar>(f: &Series<C>, p: &LogPoint) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in f.terms() {
        acc += c.to_complex() * basis_eval(f.group(), e, p)?;
    }
    Ok(acc)
}

pub fn series_eval<C: Scalar>(f: &Series<C>, p: &LogPoint, tail: &TailModel) -> Result<Evaluation> {
    Ok(Evaluation {
        value: series_value(f, p)?,
        residual_bound: tail_bound(f.group(), tail, p)?,
        truncation_only: matches!(tail, TailModel::TruncationOnly),
    })
}

/// `e_pivot(p) * unit(p)`; the tail model applies to the unit.
pub fn meromorphic_eval<C: Scalar>(h: &Meromorphic<C>, p: &LogPoint, tail: &TailModel) -> Result<Evaluation> {
    let lead = basis_eval(h.group(), h.pivot(), p)?;
    let unit = series_eval(h.unit(), p, tail)?;
    Ok(Evaluation {
        value: lead * unit.value,
        residual_bound: lead.norm() * unit.residual_bound,
        truncation_only: unit.truncation_only,
    })
}

/// Nested dyadic angles in `[-sigma, sigma]`; more samples never drop a node.
fn dyadic_angles(sigma: f64, samples: usize) -> Vec<f64> {
    let intervals = samples.max(2).saturating_sub(1).next_power_of_two();
    (0..=intervals).map(|j| -sigma + 2.0 * sigma * j as f64 / intervals as f64).collect()
}

/// Estimate of `sum |a_gamma| sup_d |e_gamma|`.
///
/// Pure powers use the exact supremum `radius^alpha`. Log-bearing terms are
/// sampled on the arc `|z| = radius`, so the result is an estimate that can
/// only grow with `samples`.
pub fn majorant<C: Scalar>(f: &Series<C>, d: &SectorDisc, samples: usize) -> f64 {
    let g = f.group();
    let mut total = 0.0;
    for (e, c) in f.terms() {
        let a = c.norm();
        let alpha = g.alpha_f64(e);
        let beta = g.beta_f64(e);
        let sup = if beta == 0.0 {
            if alpha >= 0.0 {
                d.radius.powf(alpha)
            } else {
                f64::INFINITY
            }
        } else {
            let ln_r = d.radius.ln();
            let at = |phi: f64| d.radius.powf(alpha) * (ln_r * ln_r + phi * phi).powf(-beta / 2.0);
            match d.sigma {
                None if beta < 0.0 => f64::INFINITY,
                None => at(0.0),
                Some(sigma) => dyadic_angles(sigma, samples).into_iter().map(at).fold(0.0, f64::max),
            }
        };
        if a > 0.0 {
            total += a * sup;
        }
    }
    if total.is_nan() {
        f64::INFINITY
    } else {
        total
    }
}

/// Average of `f` over the `L`-fold circle of radius `R`,
/// `(1 / 2 pi i L) \oint f(z) dz / z`, by the trapezoid rule in `phi`.
pub fn spiral_average(f: impl Fn(LogPoint) -> Complex64, radius: f64, turns: usize, nodes_per_turn: usize) -> Complex64 {
    let n = (turns * nodes_per_turn).max(1);
    let half_width = PI * turns as f64;
    let h = 2.0 * half_width / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        let phi = -half_width + h * j as f64;
        acc += f(LogPoint { r: radius, phi }) * w;
    }
    acc * h / (2.0 * half_width)
}

/// Approximates the coefficient of `z^alpha` as the spiral average of `z^{-alpha} f`.
pub fn extract_coefficient(
    f: impl Fn(LogPoint) -> Complex64,
    group: &ExponentGroup,
    alpha: &Exponent,
    radius: f64,
    turns: usize,
    nodes_per_turn: usize,
) -> Result<Complex64> {
    if group.has_logs() || alpha.log != 0 {
        return Err(Error::UnsupportedGroup);
    }
    let a = group.alpha_f64(&group.check(alpha)?);
    Ok(spiral_average(|p| p.pow(-a) * f(p), radius, turns, nodes_per_turn))
}

/// CSV rows `r,phi,re,im,residual_bound`.
pub fn eval_csv<C: Scalar>(f: &Series<C>, points: &[LogPoint], tail: &TailModel) -> Result<String> {
    let mut out = String::from("r,phi,re,im,residual_bound\n");
    for p in points {
        let v = series_eval(f, p, tail)?;
        let _ = writeln!(out, "{:?},{:?},{:?},{:?},{:?}", p.r, p.phi, v.value.re, v.value.im, v.residual_bound);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{GeneratorEnclosure, Q};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn basis_examples() {
        let lex = ExponentGroup::lex_integers();
        let p = LogPoint::new(0.3, 1.7).unwrap();
        assert_eq!(basis_eval(&lex, &Exponent::zero(), &p).unwrap(), Complex64::new(1.0, 0.0));
        let e = LogPoint::new((-1.0f64).exp(), 0.0).unwrap();
        let v = basis_eval(&lex, &Exponent::int_pair(1, -1), &e).unwrap();
        assert!(close(v, Complex64::new((-1.0f64).exp(), 0.0), 1e-15));
        let line = ExponentGroup::RationalLine;
        let v = basis_eval(&line, &Exponent::ratio(1, 2), &LogPoint::new(4.0, 2.0 * PI).unwrap()).unwrap();
        assert!(close(v, Complex64::new(-2.0, 0.0), 1e-14));
    }

    #[test]
    fn log_factor_outside_unit_disc_is_rejected() {
        let lex = ExponentGroup::lex_integers();
        let p = LogPoint::new(2.0, 0.0).unwrap();
        assert!(matches!(basis_eval(&lex, &Exponent::int_pair(1, -1), &p), Err(Error::BranchCutHit { .. })));
    }

    #[test]
    fn generator_series_against_cosh() {
        let g = ExponentGroup::RationalPlusGenerator(GeneratorEnclosure::pi(20));
        let mut fact = 1.0f64;
        let mut terms = Vec::new();
        for k in 0..12i64 {
            if k > 0 {
                fact *= ((2 * k - 1) * 2 * k) as f64;
            }
            let e = Exponent::with_generator(Q::from_integer(2 * k), Q::from_integer(1));
            terms.push((e, Complex64::new(1.0 / fact, 0.0)));
        }
        let f = Series::new(g, terms, None).unwrap();
        let v = series_value(&f, &LogPoint::new(0.3, 0.0).unwrap()).unwrap();
        let exact = 0.3f64.powf(PI) * 0.3f64.cosh();
        assert!((v.re - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn majorant_examples() {
        let line = ExponentGroup::RationalLine;
        let one = BigRational::from_integer(BigInt::from(1));
        let f = Series::new(line.clone(), vec![(Exponent::int(1), one.clone()), (Exponent::int(2), one.clone())], None).unwrap();
        let d = SectorDisc { radius: 0.5, sigma: None };
        assert_eq!(majorant(&f, &d, 8), 0.75);
        let lex = ExponentGroup::lex_integers();
        let g = Series::monomial(lex.clone(), Exponent::int_pair(1, -1), one, None).unwrap();
        let d = SectorDisc { radius: 0.5, sigma: Some(PI) };
        let m4 = majorant(&g, &d, 4);
        assert!(m4 >= 0.5 * 2f64.ln());
        assert!(majorant(&g, &d, 64) >= m4);
        assert_eq!(majorant(&Series::<BigRational>::zero(lex), &d, 4), 0.0);
    }

    #[test]
    fn spiral_average_of_constant_is_exact() {
        let c = Complex64::new(2.5, -1.0);
        let v = spiral_average(|_| c, 0.5, 3, 16);
        assert!((v - c).norm() < 1e-14);
    }

    #[test]
    fn spiral_average_decays_for_nonzero_power() {
        // |average of e^{i a phi}| = |sin(a pi L)| / (a pi L)
        let a = PI;
        let f = |p: LogPoint| p.pow(a);
        for turns in [16, 64, 256] {
            let v = spiral_average(f, 0.5, turns, 64).norm();
            assert!(v <= 1.01 * 0.5f64.powf(a) / (a * PI * turns as f64));
        }
    }

    #[test]
    fn extraction_rejects_log_groups() {
        let lex = ExponentGroup::lex_integers();
        assert_eq!(
            extract_coefficient(|_| Complex64::new(1.0, 0.0), &lex, &Exponent::zero(), 0.5, 4, 8),
            Err(Error::UnsupportedGroup)
        );
    }

    #[test]
    fn csv_has_header_and_rows() {
        let f = Series::constant(ExponentGroup::RationalLine, Complex64::new(1.0, 0.0), None).unwrap();
        let pts = [LogPoint::new(0.5, 0.0).unwrap(), LogPoint::new(0.25, 1.0).unwrap()];
        let csv = eval_csv(&f, &pts, &TailModel::TruncationOnly).unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("r,phi,re,im,residual_bound"));
    }
}
