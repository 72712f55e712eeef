//! Explicit coefficient bounds for the kernel parts and weighted Hilbert-Schmidt checks.

use std::f64::consts::PI;

use statrs::function::gamma::gamma_ui;

use super::kernel::{ordered, KernelParts, PartsPlan};
use super::special::gamma_fn;
use super::Order;
use crate::error::{Error, Result};

/// Which right-hand side to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundForm {
    /// As displayed: the `f2` bound without `y^{-nu}` and the log bound without `(xy)^n`.
    /// The log bound can fail once `xy` is well above 4.
    Displayed,
    /// With the factors the estimates actually produce.
    Proof,
}

/// Caller-supplied constants for the `f2` bound: `x >= c` and `R >= r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConfig {
    pub c: f64,
    pub r0: f64,
    pub form: BoundForm,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self { c: 1.0, r0: 0.5, form: BoundForm::Displayed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    /// `a1`, `a2` (non-integer order) or `b1`, `b2` (integer order).
    pub part: &'static str,
    pub k: usize,
    pub radius: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

fn check(part: &'static str, k: usize, radius: f64, lhs: f64, rhs: f64) -> BoundCheck {
    BoundCheck { part, k, radius, lhs, rhs, pass: lhs.is_finite() && lhs <= rhs }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `tau(s) = (pi/2)|nu^2 - 1/4| / s` from the Hankel error bound.
fn tau(nu: f64, s: f64) -> f64 {
    PI / 2.0 * (nu * nu - 0.25).abs() / s
}

/// `sqrt(2/pi) 2^nu (1 + tau e^tau) / (|sin nu pi| Gamma(nu+1))` with `tau = tau(r0 c)`.
pub fn f2_constant(nu: &Order, cfg: &BoundConfig) -> Result<f64> {
    let v = nu.value();
    let t = tau(v, cfg.r0 * cfg.c);
    Ok((2.0 / PI).sqrt() * 2f64.powf(v) * (1.0 + t * t.exp()) / (nu.sin_pi().abs() * gamma_fn(v + 1.0)?))
}

/// Upper bound for `sum_k |psi(k+1) + psi(n+k+1)| s^{2k} / (k! (n+k)!)`.
fn digamma_sum_bound(n: u32, s: f64) -> f64 {
    2.0 / factorial(n) * ((n + 1) as f64 + s * s) * (2.0 * s).exp()
}

/// Sup of `|g2|` over `|lambda| = R`, assembled term by term.
pub fn g2_majorant(n: u32, x: f64, y: f64, radius: f64) -> f64 {
    let nf = factorial(n);
    let sq = (x * y).sqrt();
    let jj = (radius * radius * x * y / 4.0).powi(n as i32) * (radius * (x + y)).exp() / (nf * nf);
    let log_factor = (1.0 + (2.0 / PI * (y / 2.0).ln()).powi(2)).sqrt();
    let t1 = PI / 2.0 * sq * log_factor * jj;
    let mid: f64 = (0..n)
        .map(|k| factorial(n - k - 1) / factorial(k) * (radius * y / 2.0).powi(2 * k as i32))
        .sum();
    let t2 = 0.5 * sq * (x / y).powi(n as i32) * (radius * x).exp() / nf * mid;
    let t3 = 0.5 * sq * (radius * radius * x * y / 4.0).powi(n as i32) * (radius * x).exp() / nf
        * digamma_sum_bound(n, radius * y / 2.0);
    t1 + t2 + t3
}

/// Right-hand sides at `lambda^{2k}`, indexed like the parts.
fn rhs_pair(nu: &Order, x: f64, y: f64, k: usize, radius: f64, cfg: &BoundConfig) -> Result<[f64; 2]> {
    let rk = radius.powi(-2 * k as i32);
    let e = (radius * (x + y)).exp();
    match nu.as_integer() {
        None => {
            let v = nu.value();
            let g = gamma_fn(v + 1.0)?;
            let a1 = rk * (x * y).powf(v + 0.5) * e / (4f64.powf(v) * nu.sin_pi().abs() * g * g);
            let mut a2 = rk * radius.powf(-v) * f2_constant(nu, cfg)? / radius.sqrt() * x.sqrt() * (x / y).powf(v) * e;
            if cfg.form == BoundForm::Proof {
                a2 *= y.powf(-v);
            }
            Ok([a1, a2])
        }
        Some(n) => {
            let nf = factorial(n);
            let mut b1 = rk * (x * y).sqrt() * (radius / 2.0).powi(2 * n as i32) * e / (nf * nf);
            if cfg.form == BoundForm::Proof {
                b1 *= (x * y).powi(n as i32);
            }
            Ok([b1, rk * g2_majorant(n, x, y, radius)])
        }
    }
}

fn names(nu: &Order) -> [&'static str; 2] {
    if nu.as_integer().is_some() {
        ["b1", "b2"]
    } else {
        ["a1", "a2"]
    }
}

fn validate(nu: &Order, x: f64, radius: f64, cfg: &BoundConfig) -> Result<()> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if nu.as_integer().is_none() && (x < cfg.c || radius < cfg.r0) {
        return Err(Error::Domain(format!(
            "f2 bound needs x >= c and R >= r0 (x = {x}, c = {}, R = {radius}, r0 = {})",
            cfg.c, cfg.r0
        )));
    }
    Ok(())
}

fn stored(parts: &KernelParts, k: usize) -> [f64; 2] {
    match parts {
        KernelParts::NonInteger { f1, f2 } => [f1[k].norm(), f2[k].norm()],
        KernelParts::Integer { g1, g2 } => [g1[k].norm(), g2[k].norm()],
    }
}

/// Checks both coefficient bounds at `lambda^{2k}` for one radius.
pub fn coeff_bound_check(nu: &Order, x: f64, y: f64, k: usize, radius: f64, cfg: &BoundConfig) -> Result<Vec<BoundCheck>> {
    coeff_bound_sweep(nu, x, y, k, &[radius], cfg).map(|v| v.into_iter().filter(|c| c.k == k).collect())
}

/// All bounds for `k = 0..=k_max` and every radius.
pub fn coeff_bound_sweep(nu: &Order, x: f64, y: f64, k_max: usize, radii: &[f64], cfg: &BoundConfig) -> Result<Vec<BoundCheck>> {
    let (x, y) = ordered(x, y)?;
    let parts = PartsPlan::new(nu, k_max + 1)?.parts(x, y);
    let labels = names(nu);
    let mut out = Vec::new();
    for &radius in radii {
        validate(nu, x, radius, cfg)?;
        for k in 0..=k_max {
            let lhs = stored(&parts, k);
            let rhs = rhs_pair(nu, x, y, k, radius, cfg)?;
            for j in 0..2 {
                out.push(check(labels[j], k, radius, lhs[j], rhs[j]));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `e^{-kappa x}`
    Exponential,
    /// `e^{-kappa x^2}`
    Gaussian,
}

impl Weight {
    pub fn eval(&self, kappa: f64, t: f64) -> f64 {
        match self {
            Weight::Exponential => (-kappa * t).exp(),
            Weight::Gaussian => (-kappa * t * t).exp(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Weight::Exponential => "exponential",
            Weight::Gaussian => "gaussian",
        }
    }
}

/// Closed bound for `int_c^inf t^p e^{2st} w(t) dt`.
pub fn weight_integral_bound(p: f64, s: f64, kappa: f64, c: f64, weight: Weight) -> Result<f64> {
    if p < 0.0 {
        return Ok(c.powf(p) * weight_integral_bound(0.0, s, kappa, c, weight)?);
    }
    match weight {
        Weight::Exponential => {
            let k = kappa - 2.0 * s;
            if !(k > 0.0) {
                return Err(Error::Domain(format!("exponential weight needs kappa > 2s (kappa = {kappa}, s = {s})")));
            }
            Ok(if p == 0.0 { (-k * c).exp() / k } else { gamma_fn(p + 1.0)? / k.powf(p + 1.0) })
        }
        Weight::Gaussian => {
            if s > c * kappa / 4.0 {
                return Err(Error::Domain(format!("gaussian weight needs s <= c kappa / 4 (s = {s})")));
            }
            let a = (p + 1.0) / 2.0;
            Ok(gamma_fn(a)? / (2.0 * (kappa / 2.0).powf(a)))
        }
    }
}

/// Bound for `int_L^inf t^p e^{2st} w(t) dt`, via the upper incomplete gamma function.
pub fn weight_tail_bound(p: f64, s: f64, kappa: f64, cut: f64, weight: Weight) -> Result<f64> {
    if p < 0.0 {
        return Ok(cut.powf(p) * weight_tail_bound(0.0, s, kappa, cut, weight)?);
    }
    let a = match weight {
        Weight::Exponential => p + 1.0,
        Weight::Gaussian => (p + 1.0) / 2.0,
    };
    match weight {
        Weight::Exponential => {
            let k = kappa - 2.0 * s;
            if !(k > 0.0) {
                return Err(Error::Domain("exponential weight needs kappa > 2s".into()));
            }
            Ok(gamma_ui(a, k * cut) / k.powf(a))
        }
        Weight::Gaussian => {
            if s > cut * kappa / 4.0 {
                return Err(Error::Domain("gaussian weight needs s <= L kappa / 4".into()));
            }
            let h = kappa / 2.0;
            Ok(gamma_ui(a, h * cut * cut) / (2.0 * h.powf(a)))
        }
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for m in 2..=n {
                let p2 = ((2 * m - 1) as f64 * t * p1 - (m - 1) as f64 * p0) / m as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        out.push((t, 2.0 / ((1.0 - t * t) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre nodes on `[a, b]`.
fn composite_nodes(a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        let mid = a + h * (p as f64 + 0.5);
        out.extend(rule.iter().map(|(t, w)| (mid + 0.5 * h * t, 0.5 * h * w)));
    }
    out
}

/// Quadrature of `int_c^L t^p e^{2st} w(t) dt`, for comparison with the closed bound.
pub fn weight_integral_quad(p: f64, s: f64, kappa: f64, c: f64, cut: f64, weight: Weight) -> f64 {
    let panels = ((cut - c) * 4.0).ceil().max(1.0) as usize;
    composite_nodes(c, cut, panels, &gauss_legendre(12))
        .iter()
        .map(|(t, w)| w * t.powf(p) * (2.0 * s * t).exp() * weight.eval(kappa, *t))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsConfig {
    pub kappa: f64,
    pub c: f64,
    pub radius: f64,
    /// Quadrature domain is `[c, cut]^2`.
    pub cut: f64,
    pub weight: Weight,
    pub panels_per_unit: usize,
    pub nodes: usize,
}

/// Largest number of 2-D quadrature points before refusing.
pub const QUAD_POINT_BUDGET: usize = 4_000_000;

impl HsConfig {
    /// `R = kappa/3` with the exponential weight, `R = c kappa / 8` with the Gaussian weight.
    pub fn standard(kappa: f64, c: f64, weight: Weight) -> Self {
        let radius = match weight {
            Weight::Exponential => kappa / 3.0,
            Weight::Gaussian => c * kappa / 8.0,
        };
        Self { kappa, c, radius, cut: c + 60.0, weight, panels_per_unit: 1, nodes: 10 }
    }
}

/// `coef * min^px e^{sx min} * max^py e^{sy max}`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Separable {
    coef: f64,
    px: f64,
    sx: f64,
    py: f64,
    sy: f64,
}

impl Separable {
    fn new(coef: f64, px: f64, sx: f64, py: f64, sy: f64) -> Self {
        Self { coef, px, sx, py, sy }
    }

    fn symmetric(&self) -> bool {
        self.px == self.py && self.sx == self.sy
    }

    fn describe(&self) -> String {
        format!("{:.3e}*m^{}e^({}m)*M^{}e^({}M)", self.coef, self.px, self.sx, self.py, self.sy)
    }
}

/// Pointwise majorant of `|coefficient of lambda^{2k}| R^{2k}` on `c <= x <= y`.
fn majorant_terms(nu: &Order, j: usize, radius: f64, c: f64) -> Result<Vec<Separable>> {
    let r = radius;
    let terms = match (nu.as_integer(), j) {
        (None, 1) => {
            let v = nu.value();
            let g = gamma_fn(v + 1.0)?;
            let d = 4f64.powf(v) * nu.sin_pi().abs() * g * g;
            vec![Separable::new(1.0 / d, v + 0.5, r, v + 0.5, r)]
        }
        (None, 2) => {
            // sqrt(min) (min/max)^nu max^{-nu}, the factor lost from the Hankel bound restored
            let v = nu.value();
            let k = r.powf(-v - 0.5) * f2_constant(nu, &BoundConfig { c, r0: r, form: BoundForm::Proof })?;
            vec![Separable::new(k, v + 0.5, r, -2.0 * v, r)]
        }
        (Some(n), 1) => {
            let nf = factorial(n);
            let p = n as f64 + 0.5;
            vec![Separable::new((r / 2.0).powi(2 * n as i32) / (nf * nf), p, r, p, r)]
        }
        (Some(n), 2) => {
            let nf = factorial(n);
            let p = n as f64 + 0.5;
            let base = (r / 2.0).powi(2 * n as i32) / (nf * nf);
            // |1 + (2i/pi) ln(M/2)| <= 1 + (2/pi) ln+(2/c) + (2/pi) M
            let log_const = 1.0 + 2.0 / PI * (2.0 / c).ln().max(0.0);
            let mut v = vec![
                Separable::new(PI / 2.0 * log_const * base, p, r, p, r),
                Separable::new(base, p, r, p + 1.0, r),
                Separable::new((n + 1) as f64 * base, p, r, p, r),
                Separable::new((r / 2.0).powi(2) * base, p, r, p + 2.0, r),
            ];
            for k in 0..n {
                let coef = 0.5 / nf * factorial(n - k - 1) / factorial(k) * (r / 2.0).powi(2 * k as i32);
                v.push(Separable::new(coef, p, r, 2.0 * k as f64 + 0.5 - n as f64, 0.0));
            }
            v
        }
        _ => return Err(Error::Domain(format!("part index must be 1 or 2, got {j}"))),
    };
    Ok(terms)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HsReport {
    pub part: &'static str,
    pub k: usize,
    pub radius: f64,
    pub weight: Weight,
    /// Quadrature of the squared weighted kernel over `[c, cut]^2`.
    pub quad: f64,
    /// Bound for the squared integral outside `[c, cut]^2`.
    pub tail: f64,
    /// `sqrt(quad + tail)`
    pub lhs: f64,
    /// `C(nu, kappa)`
    pub constant: f64,
    /// `R^{-2k} C(nu, kappa)`
    pub rhs: f64,
    pub pass: bool,
    pub assembly: String,
}

/// Weighted Hilbert-Schmidt norm of the sharply cut coefficient kernel of part `j`
/// at `lambda^{2k}`, against `R^{-2k} C(nu, kappa)`.
pub fn hs_bound_check(nu: &Order, j: usize, k: usize, cfg: &HsConfig) -> Result<HsReport> {
    let HsConfig { kappa, c, radius, cut, weight, panels_per_unit, nodes } = *cfg;
    if !(kappa > 0.0 && c > 0.0 && radius > 0.0 && cut > c) || panels_per_unit == 0 || nodes == 0 {
        return Err(Error::Domain("hs check needs kappa, c, R > 0, cut > c and a nonempty rule".into()));
    }
    let terms = majorant_terms(nu, j, radius, c)?;
    let panels = ((cut - c) * panels_per_unit as f64).ceil() as usize;
    let n1 = panels * nodes;
    if n1.saturating_mul(n1) > QUAD_POINT_BUDGET {
        return Err(Error::QuadratureBudgetExceeded(format!("{n1}^2 points exceed {QUAD_POINT_BUDGET}")));
    }

    let plan = PartsPlan::new(nu, k + 1)?;
    let grid = composite_nodes(c, cut, panels, &gauss_legendre(nodes));
    let mut quad = 0.0;
    for (a, (x, wx)) in grid.iter().enumerate() {
        let wx = wx * weight.eval(kappa, *x);
        // symmetric integrand: lower triangle twice plus the diagonal
        for (y, wy) in &grid[..=a] {
            let parts = plan.parts(*y, *x);
            let v = stored(&parts, k)[j - 1];
            let f = if *y == *x { 1.0 } else { 2.0 };
            quad += f * wx * wy * weight.eval(kappa, *y) * v * v;
        }
    }

    let rk = radius.powi(-2 * k as i32);
    let mut constant = 0.0;
    let mut tail = 0.0;
    let mut assembly = Vec::new();
    for t in &terms {
        let ix = weight_integral_bound(2.0 * t.px, t.sx, kappa, c, weight)?;
        let iy = weight_integral_bound(2.0 * t.py, t.sy, kappa, c, weight)?;
        let sym = if t.symmetric() { 1.0 } else { 2f64.sqrt() };
        constant += t.coef * sym * (ix * iy).sqrt();
        tail += 2.0 * t.coef * t.coef * ix * weight_tail_bound(2.0 * t.py, t.sy, kappa, cut, weight)?;
        assembly.push(t.describe());
    }
    tail *= terms.len() as f64 * rk * rk;
    let lhs = (quad + tail).sqrt();
    let rhs = rk * constant;
    Ok(HsReport {
        part: names(nu)[j - 1],
        k,
        radius,
        weight,
        quad,
        tail,
        lhs,
        constant,
        rhs,
        pass: lhs <= rhs,
        assembly: format!("C = sum over terms of coef*sqrt(I_min*I_max) (x sqrt2 if asymmetric): {}", assembly.join(" + ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::GeneratorEnclosure;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(6);
        let s: f64 = rule.iter().map(|(t, w)| w * t.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((rule.iter().map(|r| r.1).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn half_integer_bounds_pass() {
        let nu = Order::ratio(1, 2).unwrap();
        let checks = coeff_bound_sweep(&nu, 1.0, 2.0, 20, &[1.0], &BoundConfig::default()).unwrap();
        assert_eq!(checks.len(), 42);
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn all_sweeps_pass() {
        let pi = Order::enclosure(GeneratorEnclosure::pi(15)).unwrap();
        for nu in [Order::ratio(5, 2).unwrap(), pi, Order::int(1), Order::int(2)] {
            let checks = coeff_bound_sweep(&nu, 1.0, 2.0, 20, &[0.5, 1.0, 2.0], &BoundConfig::default()).unwrap();
            for c in &checks {
                assert!(c.pass, "nu={nu} {c:?}");
            }
        }
    }

    #[test]
    fn log_coefficient_example() {
        let c = coeff_bound_check(&Order::int(1), 1.0, 2.0, 1, 1.0, &BoundConfig::default()).unwrap();
        let b1 = c.iter().find(|c| c.part == "b1").unwrap();
        assert!((b1.rhs - 2f64.sqrt() * 0.25 * 3f64.exp()).abs() < 1e-12);
        assert!(b1.pass);
    }

    #[test]
    fn f2_bound_preconditions() {
        let nu = Order::ratio(1, 2).unwrap();
        assert!(coeff_bound_check(&nu, 0.5, 2.0, 0, 1.0, &BoundConfig::default()).is_err());
        assert!(coeff_bound_check(&nu, 1.0, 2.0, 0, 0.25, &BoundConfig::default()).is_err());
    }

    #[test]
    fn gaussian_closed_bound_dominates_quadrature() {
        for v in [0.5, 2.0] {
            let p = 2.0 * v + 1.0;
            let (kappa, c) = (3.0, 1.0);
            let s = c * kappa / 8.0;
            let q = weight_integral_quad(p, s, kappa, c, c + 20.0, Weight::Gaussian);
            let b = weight_integral_bound(p, s, kappa, c, Weight::Gaussian).unwrap();
            assert!(q <= b, "{q} > {b}");
            assert!((b - gamma_fn(v + 1.0).unwrap() / (2.0 * (kappa / 2.0).powf(v + 1.0))).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_matches_quadrature() {
        let t = weight_tail_bound(3.0, 0.5, 3.0, 2.0, Weight::Exponential).unwrap();
        let q = weight_integral_quad(3.0, 0.5, 3.0, 2.0, 60.0, Weight::Exponential);
        assert!((t - q).abs() < 1e-10 * t);
    }

    #[test]
    fn hs_half_integer_exponential() {
        let cfg = HsConfig::standard(3.0, 1.0, Weight::Exponential);
        for j in [1, 2] {
            let r = hs_bound_check(&Order::ratio(1, 2).unwrap(), j, 0, &cfg).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn hs_integer_gaussian() {
        let cfg = HsConfig::standard(3.0, 1.0, Weight::Gaussian);
        for j in [1, 2] {
            let r = hs_bound_check(&Order::int(2), j, 5, &cfg).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = HsConfig::standard(3.0, 1.0, Weight::Exponential);
        cfg.panels_per_unit = 100;
        assert!(matches!(
            hs_bound_check(&Order::ratio(1, 2).unwrap(), 1, 0, &cfg),
            Err(Error::QuadratureBudgetExceeded(_))
        ));
    }
}
