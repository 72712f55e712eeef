//! Browser bindings for three small demonstrations. Each binding wraps a plain
//! function so the numbers can be tested natively.

use hahn::bessel::kernel::{resolvent_kernel_direct, resolvent_kernel_series};
use hahn::bessel::Order;
use hahn::eval::{extract_coefficient, series_value};
use hahn::exponent::Q;
use hahn::{Exponent, ExponentGroup, GeneratorEnclosure, LogPoint, Series};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use wasm_bindgen::prelude::*;

fn js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

/// Rows `r, |series|, |direct|, |series - direct|` along the ray `arg lambda = phi`,
/// radii spaced geometrically from `r_min` to `r_max`.
pub fn kernel_sweep_rows(
    nu: &str,
    x: f64,
    y: f64,
    terms: usize,
    phi: f64,
    r_min: f64,
    r_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if !(r_min > 0.0 && r_max >= r_min) || n < 2 {
        return Err("need 0 < r_min <= r_max and at least two points".into());
    }
    let nu = Order::parse(nu, 15).map_err(|e| e.to_string())?;
    let k = resolvent_kernel_series(&nu, x, y, terms).map_err(|e| e.to_string())?;
    let step = (r_max / r_min).ln() / (n - 1) as f64;
    let mut out = Vec::with_capacity(4 * n);
    for j in 0..n {
        let p = LogPoint::new(r_min * (step * j as f64).exp(), phi).map_err(|e| e.to_string())?;
        let s = series_value(&k.series, &p).map_err(|e| e.to_string())?;
        let d = resolvent_kernel_direct(&nu, &p, x, y).map_err(|e| e.to_string())?;
        out.extend([p.r, s.norm(), d.norm(), (s - d).norm()]);
    }
    Ok(out)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn kernel_sweep(nu: &str, x: f64, y: f64, terms: usize, phi: f64, r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    kernel_sweep_rows(nu, x, y, terms, phi, r_min, r_max, n).map_err(js)
}

/// `1 + 2 z^{1/2} + 3 z^pi`.
fn test_function(z: LogPoint) -> Complex64 {
    Complex64::new(1.0, 0.0) + 2.0 * z.pow(0.5) + 3.0 * z.pow(std::f64::consts::PI)
}

/// Rows `L, |error|` for `L = 1, 2, 4, ..., 2^levels` when recovering the
/// coefficient of `z^alpha` (`alpha` is `0`, `1/2` or `pi`) from the spiral average.
pub fn spiral_convergence_rows(alpha: &str, radius: f64, levels: u32) -> Result<Vec<f64>, String> {
    if !(radius > 0.0 && radius < 1.0) || levels > 12 {
        return Err("radius must lie in (0, 1) and levels at most 12".into());
    }
    let g = ExponentGroup::RationalPlusGenerator(GeneratorEnclosure::pi(15));
    let (e, stored) = match alpha.trim() {
        "0" => (Exponent::zero(), 1.0),
        "1/2" => (Exponent::ratio(1, 2), 2.0),
        "pi" => (Exponent::with_generator(Q::from_integer(0), Q::from_integer(1)), 3.0),
        other => return Err(format!("alpha must be 0, 1/2 or pi, got {other}")),
    };
    let mut out = Vec::with_capacity(2 * (levels as usize + 1));
    for m in 0..=levels {
        let turns = 1usize << m;
        let c = extract_coefficient(test_function, &g, &e, radius, turns, 64).map_err(|e| e.to_string())?;
        out.extend([turns as f64, (c - stored).norm()]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn spiral_convergence(alpha: &str, radius: f64, levels: u32) -> Result<Vec<f64>, JsValue> {
    spiral_convergence_rows(alpha, radius, levels).map_err(js)
}

/// Inverts `1 + z log z` exactly up to `z^order` and reports, for each partial
/// order `n = 1..=order`, the error of the truncated sum against `1/(1 + z log z)`
/// at `(r, phi)`. The first entry counts the coefficients that are not exactly one.
pub fn neumann_zlogz_rows(order: u32, r: f64, phi: f64) -> Result<Vec<f64>, String> {
    if order == 0 || order > 60 {
        return Err("order must lie in 1..=60".into());
    }
    let g = ExponentGroup::lex_integers();
    let one = BigRational::from_integer(BigInt::from(1));
    // z log z = -e_(1,-1)
    let f = Series::new(
        g.clone(),
        vec![(Exponent::zero(), one.clone()), (Exponent::int_pair(1, -1), -one.clone())],
        Some(Exponent::int_pair(order as i64 + 1, -(order as i64 + 1))),
    )
    .map_err(|e| e.to_string())?;
    let inv = f.neumann_invert().map_err(|e| e.to_string())?;
    let off = inv.terms().iter().filter(|(_, c)| *c != one).count() + (order as usize + 1).abs_diff(inv.terms().len());

    let p = LogPoint::new(r, phi).map_err(|e| e.to_string())?;
    let z = p.to_complex();
    let exact = (Complex64::new(1.0, 0.0) + z * p.log()).inv();
    let mut out = vec![off as f64];
    for n in 1..=order as i64 {
        let partial = inv.truncate(Exponent::int_pair(n + 1, -(n + 1))).map_err(|e| e.to_string())?;
        let v = series_value(&partial, &p).map_err(|e| e.to_string())?;
        out.push((v - exact).norm());
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn neumann_zlogz(order: u32, r: f64, phi: f64) -> Result<Vec<f64>, JsValue> {
    neumann_zlogz_rows(order, r, phi).map_err(js)
}
