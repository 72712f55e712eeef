//! Value parsers for command-line options.

use std::f64::consts::PI;

use hahn::bessel::Order;
use hahn::exponent::parse_rational;
use hahn::json::exponent_from_json;
use hahn::{Exponent, ExponentGroup, LogPoint};
use num_rational::BigRational;

/// Digits used for `pi` when an option does not give its own.
pub fn generator_digits() -> usize {
    std::env::var("HAHN_GENERATOR_DIGITS").ok().and_then(|s| s.parse().ok()).filter(|d| *d > 0).unwrap_or(15)
}

/// A real number, optionally a multiple of pi: `0.3`, `-2`, `pi`, `pi/6`, `2*pi/3`, `-3pi`.
pub fn real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let Some(at) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| format!("not a number: {s}"));
    };
    let head = t[..at].trim_end_matches('*');
    let scale = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| format!("bad multiple of pi: {s}"))?,
    };
    let tail = &t[at + 2..];
    let div = match tail.strip_prefix('/') {
        Some(d) => d.parse::<f64>().map_err(|_| format!("bad divisor: {s}"))?,
        None if tail.is_empty() => 1.0,
        None => return Err(format!("trailing text after pi: {s}")),
    };
    let v = scale * PI / div;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s}"))
    }
}

fn reals(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s.split(',').map(real).collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated values, got {}", v.len()));
    }
    Ok(v)
}

/// `r,phi` on the logarithmic cover.
pub fn point(s: &str) -> Result<LogPoint, String> {
    let v = reals(s, 2)?;
    LogPoint::new(v[0], v[1]).map_err(|e| e.to_string())
}

/// `r_min,r_max,n,phi`: `n` radii spaced geometrically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub phi: f64,
}

pub fn ray(s: &str) -> Result<Ray, String> {
    let v = reals(s, 4)?;
    let n = v[2];
    if !(v[0] > 0.0 && v[1] >= v[0]) || n < 1.0 || n.fract() != 0.0 {
        return Err(format!("ray needs 0 < r_min <= r_max and a positive count: {s}"));
    }
    Ok(Ray { r_min: v[0], r_max: v[1], n: n as usize, phi: v[3] })
}

impl Ray {
    pub fn points(&self) -> Vec<LogPoint> {
        if self.n == 1 {
            return vec![LogPoint { r: self.r_min, phi: self.phi }];
        }
        let q = (self.r_max / self.r_min).ln() / (self.n - 1) as f64;
        let mut v: Vec<LogPoint> =
            (0..self.n).map(|j| LogPoint { r: self.r_min * (q * j as f64).exp(), phi: self.phi }).collect();
        v[self.n - 1].r = self.r_max;
        v
    }
}

/// `r,phi_min,phi_max,n`: `n` equally spaced angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub r: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub n: usize,
}

pub fn arc(s: &str) -> Result<Arc, String> {
    let v = reals(s, 4)?;
    let n = v[3];
    if !(v[0] > 0.0 && v[2] >= v[1]) || n < 1.0 || n.fract() != 0.0 {
        return Err(format!("arc needs r > 0, phi_min <= phi_max and a positive count: {s}"));
    }
    Ok(Arc { r: v[0], phi_min: v[1], phi_max: v[2], n: n as usize })
}

impl Arc {
    pub fn points(&self) -> Vec<LogPoint> {
        if self.n == 1 {
            return vec![LogPoint { r: self.r, phi: self.phi_min }];
        }
        let h = (self.phi_max - self.phi_min) / (self.n - 1) as f64;
        (0..self.n).map(|j| LogPoint { r: self.r, phi: self.phi_min + h * j as f64 }).collect()
    }
}

pub fn order(s: &str) -> Result<Order, String> {
    Order::parse(s, generator_digits()).map_err(|e| e.to_string())
}

/// `1/2`, `0.25`, `7`.
pub fn rational(s: &str) -> Result<BigRational, String> {
    hahn::exponent::parse_decimal(s).map_err(|e| e.to_string())
}

pub fn positive(s: &str) -> Result<f64, String> {
    let v = real(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive: {s}"))
    }
}

/// `nu[:m]`; a missing multiplicity means one.
pub fn order_item(item: &str) -> Result<(Order, u64), String> {
    let (nu, m) = match item.split_once(':') {
        // `pi:20` alone is an order with digits, not a multiplicity
        Some((a, b)) if !a.trim().starts_with("pi") || b.contains(':') => {
            let (nu, m) = item.rsplit_once(':').expect("has a colon");
            (nu, m.trim().parse::<u64>().map_err(|_| format!("bad multiplicity in {item}"))?)
        }
        _ => (item, 1),
    };
    Ok((order(nu)?, m))
}

/// Exponent text inside a known group.
///
/// Accepts a JSON exponent document, or `alpha[,beta]` where `alpha` is a
/// rational, `Ng` / `Npi` (a multiple of the generator) or `a+Ng`, and `beta`
/// is the stored log index for lex-pair groups.
pub fn exponent(g: &ExponentGroup, s: &str) -> Result<Exponent, String> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(t).map_err(|e| e.to_string())?;
        return exponent_from_json(g, &v).map_err(|e| e.to_string());
    }
    let (alpha, beta) = match t.split_once(',') {
        Some((a, b)) => (a, Some(b.trim().parse::<i64>().map_err(|_| format!("bad log index in {s}"))?)),
        None => (t, None),
    };
    let mut e = Exponent::zero();
    for part in alpha.split('+').map(str::trim) {
        let gen = part.strip_suffix("pi").or_else(|| part.strip_suffix('g'));
        match gen {
            Some(c) => {
                let c = c.trim_end_matches('*');
                let c = match c {
                    "" => parse_rational("1"),
                    "-" => parse_rational("-1"),
                    c => parse_rational(c),
                }
                .map_err(|e| e.to_string())?;
                e.gen += c;
            }
            None => e.re += parse_rational(part).map_err(|e| e.to_string())?,
        }
    }
    if let Some(b) = beta {
        e.log = b;
    }
    g.check(&e).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hahn::GeneratorEnclosure;

    #[test]
    fn reals_with_pi() {
        assert_eq!(real("0.5").unwrap(), 0.5);
        assert_eq!(real("pi").unwrap(), PI);
        assert_eq!(real("-pi").unwrap(), -PI);
        assert!((real("pi/6").unwrap() - PI / 6.0).abs() < 1e-15);
        assert!((real("2*pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((real("2pi").unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!(real("pix").is_err());
        assert!(real("abc").is_err());
    }

    #[test]
    fn points_and_sweeps() {
        let p = point("0.1,pi/6").unwrap();
        assert_eq!(p.r, 0.1);
        assert!(point("-1,0").is_err());
        assert!(point("1").is_err());
        let r = ray("0.01,0.1,3,0").unwrap().points();
        assert_eq!(r.len(), 3);
        assert!((r[1].r - 0.001f64.sqrt()).abs() < 1e-12);
        assert_eq!(r[2].r, 0.1);
        let a = arc("0.5,0,2pi,5").unwrap().points();
        assert!((a[4].phi - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn exponents_in_groups() {
        let line = ExponentGroup::RationalLine;
        assert_eq!(exponent(&line, "3").unwrap(), Exponent::int(3));
        assert_eq!(exponent(&line, "1/2").unwrap(), Exponent::ratio(1, 2));
        assert_eq!(exponent(&line, r#"{"a":[5,2]}"#).unwrap(), Exponent::ratio(5, 2));
        let pi = ExponentGroup::RationalPlusGenerator(GeneratorEnclosure::pi(15));
        let e = exponent(&pi, "1/2+2pi").unwrap();
        assert_eq!(e, Exponent::with_generator(parse_rational("1/2").unwrap(), parse_rational("2").unwrap()));
        assert_eq!(exponent(&pi, "g").unwrap(), exponent(&pi, "pi").unwrap());
        let lex = ExponentGroup::lex_integers();
        assert_eq!(exponent(&lex, "2,-1").unwrap(), Exponent::int_pair(2, -1));
        assert!(exponent(&line, "x").is_err());
    }

    #[test]
    fn order_lists() {
        let v: Vec<_> = ["1/2:3", "2", "pi:20"].iter().map(|s| order_item(s).unwrap()).collect();
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].1, 3);
        assert_eq!(v[1], (Order::int(2), 1));
        assert_eq!(v[2].1, 1);
        assert_eq!(order_item("pi:20:4").unwrap().1, 4);
        assert!(order_item("1/2:0x").is_err());
        assert!(positive("-1").is_err());
    }
}
