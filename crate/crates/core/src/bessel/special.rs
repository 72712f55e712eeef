//! Gamma, digamma at integers, and power-series Bessel/Hankel functions on the cover.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use statrs::function::gamma as sgamma;

use super::Order;
use crate::error::{Error, Result};
use crate::eval::LogPoint;

/// Largest `|z|` accepted by the series oracles.
pub const SERIES_RADIUS: f64 = 20.0;

/// Non-integer orders with `|sin(nu pi)|` below this use the integer branch.
pub const NEAR_INTEGER_GUARD: f64 = 1e-8;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("gamma is evaluated on positive reals, got {x}")));
    }
    Ok(sgamma::gamma(x))
}

pub fn ln_gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("ln gamma is evaluated on positive reals, got {x}")));
    }
    Ok(sgamma::ln_gamma(x))
}

/// `psi(k) = -gamma_E + H_{k-1}`.
pub fn digamma_int(k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("digamma has a pole at 0".into()));
    }
    Ok(-EULER_GAMMA + (1..k).map(|j| 1.0 / j as f64).sum::<f64>())
}

/// `1 / Gamma(1 - nu)` for non-integer `nu > 0`, by reflection.
fn reciprocal_gamma_one_minus(nu: &Order) -> Result<f64> {
    Ok(gamma_fn(nu.value())? * nu.sin_pi() / PI)
}

/// Taylor coefficients of `h_nu(z) = sum a_k z^{2k}`, `k = 0..=k_max`.
pub fn h_coeffs(nu: &Order, k_max: usize) -> Result<Vec<f64>> {
    let v = nu.value();
    let a0 = match nu.as_integer() {
        Some(n) => 1.0 / (1..=n).map(f64::from).product::<f64>(),
        None if v < 170.0 => 1.0 / gamma_fn(v + 1.0)?,
        None => (-ln_gamma_fn(v + 1.0)?).exp(),
    };
    Ok(recurrence(a0, v, k_max + 1))
}

/// Coefficients of `h_{-nu}` for non-integer `nu`.
pub fn h_coeffs_negative(nu: &Order, k_max: usize) -> Result<Vec<f64>> {
    if nu.as_integer().is_some() {
        return Err(Error::Domain("h_{-n} is not used for integer orders".into()));
    }
    if nu.is_zero() {
        return h_coeffs(nu, k_max);
    }
    Ok(recurrence(reciprocal_gamma_one_minus(nu)?, -nu.value(), k_max + 1))
}

/// `a_k = -a_{k-1} / (4 k (k + s))`.
fn recurrence(a0: f64, s: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut a = a0;
    for k in 0..n {
        if k > 0 {
            a = -a / (4.0 * k as f64 * (k as f64 + s));
        }
        out.push(a);
    }
    out
}

/// `sum a_k w^k` with `w = z^2`, stopping once terms drop below `1e-16` of the sum.
fn h_sum(a0: f64, s: f64, w: Complex64) -> Complex64 {
    let mut a = a0;
    let mut term = Complex64::new(a0, 0.0);
    let mut sum = term;
    let mut wk = Complex64::new(1.0, 0.0);
    for k in 1..2000 {
        a = -a / (4.0 * k as f64 * (k as f64 + s));
        wk *= w;
        term = wk * a;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm().max(1e-300) && k as f64 > w.norm().sqrt() {
            break;
        }
    }
    sum
}

fn check_radius(z: &LogPoint) -> Result<()> {
    if z.r > SERIES_RADIUS {
        return Err(Error::RadiusExceeded { modulus: z.r, radius: SERIES_RADIUS });
    }
    Ok(())
}

fn z_squared(z: &LogPoint) -> Complex64 {
    let c = z.to_complex();
    c * c
}

/// `h_nu(z)` for `nu >= 0`.
pub fn h_value(nu: &Order, z: &LogPoint) -> Result<Complex64> {
    check_radius(z)?;
    let v = nu.value();
    Ok(h_sum((-ln_gamma_fn(v + 1.0)?).exp(), v, z_squared(z)))
}

/// `h_{-nu}(z)` for non-integer `nu`.
pub fn h_value_negative(nu: &Order, z: &LogPoint) -> Result<Complex64> {
    check_radius(z)?;
    if nu.as_integer().is_some() {
        return Err(Error::Domain("h_{-n} is not used for integer orders".into()));
    }
    Ok(h_sum(reciprocal_gamma_one_minus(nu)?, -nu.value(), z_squared(z)))
}

/// `(z/2)^s` on the cover.
fn half_power(z: &LogPoint, s: f64) -> Complex64 {
    ((z.log() - LN_2) * s).exp()
}

/// `J_nu(z) = (z/2)^nu h_nu(z)` with the cover power.
pub fn bessel_j(nu: &Order, z: &LogPoint) -> Result<Complex64> {
    Ok(half_power(z, nu.value()) * h_value(nu, z)?)
}

/// `J_{-nu}(z)` for non-integer `nu`.
pub fn bessel_j_negative(nu: &Order, z: &LogPoint) -> Result<Complex64> {
    Ok(half_power(z, -nu.value()) * h_value_negative(nu, z)?)
}

/// `Y_n` from the explicit logarithmic expansion for integer order.
pub fn bessel_y_int(n: u32, z: &LogPoint) -> Result<Complex64> {
    check_radius(z)?;
    let nu = Order::int(n);
    let w = z_squared(z) / 4.0;
    let mut finite = Complex64::new(0.0, 0.0);
    if n > 0 {
        // sum_{k<n} (n-k-1)!/k! w^k
        let mut fact_nk = (1..n).map(f64::from).product::<f64>();
        let mut fact_k = 1.0;
        let mut wk = Complex64::new(1.0, 0.0);
        for k in 0..n {
            if k > 0 {
                fact_k *= f64::from(k);
                fact_nk /= f64::from(n - k);
                wk *= w;
            }
            finite += wk * (fact_nk / fact_k);
        }
    }
    let mut infinite = Complex64::new(0.0, 0.0);
    let mut wk = Complex64::new(1.0, 0.0);
    let mut fact = (-ln_gamma_fn(f64::from(n) + 1.0)?).exp(); // 1/(k!(n+k)!)
    let (mut psi_a, mut psi_b) = (digamma_int(1)?, digamma_int(n + 1)?);
    for k in 0..2000u32 {
        if k > 0 {
            wk *= -w;
            fact /= f64::from(k) * f64::from(n + k);
            psi_a += 1.0 / f64::from(k);
            psi_b += 1.0 / f64::from(n + k);
        }
        let term = wk * ((psi_a + psi_b) * fact);
        infinite += term;
        if k > 2 && term.norm() <= 1e-17 * infinite.norm() && f64::from(k) > w.norm().sqrt() {
            break;
        }
    }
    let j = bessel_j(&nu, z)?;
    let ln_half = z.log() - LN_2;
    let n = f64::from(n);
    Ok(-half_power(z, -n) * finite / PI + j * ln_half * (2.0 / PI) - half_power(z, n) * infinite / PI)
}

/// `H^(1)_nu(z)`: the integer expansion for integer orders, the connection
/// formula with `J_{-nu}` otherwise.
pub fn hankel_h1(nu: &Order, z: &LogPoint) -> Result<Complex64> {
    if let Some(n) = nu.as_integer() {
        let i = Complex64::new(0.0, 1.0);
        return Ok(bessel_j(nu, z)? + i * bessel_y_int(n, z)?);
    }
    let s = nu.sin_pi();
    if s.abs() < NEAR_INTEGER_GUARD {
        return Err(Error::NearIntegerOrder { nu: nu.value(), guard: NEAR_INTEGER_GUARD });
    }
    let phase = Complex64::new(nu.cos_pi(), -s);
    let i = Complex64::new(0.0, 1.0);
    Ok(i / s * (bessel_j(nu, z)? * phase - bessel_j_negative(nu, z)?))
}
