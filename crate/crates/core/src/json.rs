//! JSON documents for groups, exponents, series, matrix series and kernel reports.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::bessel::bounds::{BoundCheck, HsReport};
use crate::bessel::cone::{ConeKernel, SuitabilityReport};
use crate::bessel::kernel::KernelExpansion;
use crate::coeff::{Scalar, SquareMatrix};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentGroup, GeneratorEnclosure, LineGroup, Q};
use crate::fredholm::{MatrixSeries, MeromorphicMatrix, Resolution};
use crate::meromorphic::Meromorphic;
use crate::series::Series;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn int_from(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| parse_err(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| parse_err(format!("not an integer: {s}"))),
        _ => Err(parse_err(format!("expected integer, got {v}"))),
    }
}

pub fn big_rational_to_json(q: &BigRational) -> Value {
    json!([int_value(q.numer()), int_value(q.denom())])
}

pub fn big_rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let d = int_from(&a[1])?;
            if d.is_zero() {
                return Err(parse_err("zero denominator"));
            }
            Ok(BigRational::new(int_from(&a[0])?, d))
        }
        Value::Number(_) => Ok(BigRational::from_integer(int_from(v)?)),
        Value::String(s) => crate::exponent::parse_decimal(s),
        _ => Err(parse_err(format!("expected [p, q], got {v}"))),
    }
}

fn q_to_json(q: &Q) -> Value {
    json!([q.numer(), q.denom()])
}

fn q_from_json(v: &Value) -> Result<Q> {
    let b = big_rational_from_json(v)?;
    match (b.numer().to_i64(), b.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Q::new(n, d)),
        _ => Err(parse_err(format!("exponent component {b} exceeds 64 bits"))),
    }
}

fn enclosure_to_json(g: &GeneratorEnclosure) -> Value {
    json!({
        "midpoint": big_rational_to_json(g.midpoint()),
        "radius": big_rational_to_json(g.radius()),
        "rational": g.is_declared_rational(),
    })
}

fn enclosure_from_json(v: &Value) -> Result<GeneratorEnclosure> {
    if let Some(s) = v.as_str() {
        return match s.strip_prefix("pi") {
            Some("") => Ok(GeneratorEnclosure::pi(15)),
            Some(rest) => rest
                .strip_prefix(':')
                .and_then(|d| d.parse().ok())
                .map(GeneratorEnclosure::pi)
                .ok_or_else(|| parse_err(format!("bad generator {s}"))),
            None => Ok(GeneratorEnclosure::rational(crate::exponent::parse_decimal(s)?)),
        };
    }
    let mid = big_rational_from_json(v.get("midpoint").ok_or_else(|| parse_err("generator needs midpoint"))?)?;
    if v.get("rational").and_then(Value::as_bool) == Some(true) {
        return Ok(GeneratorEnclosure::rational(mid));
    }
    let rad = match v.get("radius") {
        Some(r) => big_rational_from_json(r)?,
        None => <BigRational as Zero>::zero(),
    };
    GeneratorEnclosure::new(mid, rad)
}

fn line_group_to_json(g: &LineGroup) -> Value {
    match g {
        LineGroup::RationalLine => json!({"kind": "rational_line"}),
        LineGroup::RationalPlusGenerator(e) => json!({"kind": "rational_plus_generator", "generator": enclosure_to_json(e)}),
    }
}

pub fn group_to_json(g: &ExponentGroup) -> Value {
    match g {
        ExponentGroup::RationalLine => line_group_to_json(&LineGroup::RationalLine),
        ExponentGroup::RationalPlusGenerator(e) => line_group_to_json(&LineGroup::RationalPlusGenerator(e.clone())),
        ExponentGroup::LexPair { first, beta_denominator } => json!({
            "kind": "lex_pair",
            "first": line_group_to_json(first),
            "beta_denominator": beta_denominator,
        }),
    }
}

fn line_group_from_json(v: &Value) -> Result<LineGroup> {
    match v.get("kind").and_then(Value::as_str) {
        Some("rational_line") => Ok(LineGroup::RationalLine),
        Some("rational_plus_generator") => Ok(LineGroup::RationalPlusGenerator(enclosure_from_json(
            v.get("generator").ok_or_else(|| parse_err("missing generator"))?,
        )?)),
        other => Err(parse_err(format!("unknown line group {other:?}"))),
    }
}

pub fn group_from_json(v: &Value) -> Result<ExponentGroup> {
    match v.get("kind").and_then(Value::as_str) {
        Some("lex_pair") => {
            let first = match v.get("first") {
                Some(f) => line_group_from_json(f)?,
                None => LineGroup::RationalLine,
            };
            let beta_denominator = v.get("beta_denominator").and_then(Value::as_i64).unwrap_or(1);
            if beta_denominator < 1 {
                return Err(parse_err("beta_denominator must be positive"));
            }
            Ok(ExponentGroup::LexPair { first, beta_denominator })
        }
        _ => Ok(match line_group_from_json(v)? {
            LineGroup::RationalLine => ExponentGroup::RationalLine,
            LineGroup::RationalPlusGenerator(g) => ExponentGroup::RationalPlusGenerator(g),
        }),
    }
}

fn alpha_to_json(e: &Exponent, with_gen: bool) -> Value {
    let mut m = Map::new();
    m.insert("a".into(), q_to_json(&e.re));
    if with_gen {
        m.insert("b".into(), q_to_json(&e.gen));
    }
    Value::Object(m)
}

pub fn exponent_to_json(g: &ExponentGroup, e: &Exponent) -> Value {
    let with_gen = g.generator().is_some_and(|x| !x.is_declared_rational());
    match g {
        ExponentGroup::LexPair { beta_denominator, .. } => {
            let beta = if *beta_denominator == 1 { json!(e.log) } else { json!([e.log, beta_denominator]) };
            json!({"alpha": alpha_to_json(e, with_gen), "beta": beta})
        }
        _ => alpha_to_json(e, with_gen),
    }
}

fn alpha_from_json(v: &Value) -> Result<Exponent> {
    let re = q_from_json(v.get("a").ok_or_else(|| parse_err(format!("exponent needs \"a\": {v}")))?)?;
    let gen = match v.get("b") {
        Some(b) => q_from_json(b)?,
        None => Q::zero(),
    };
    Ok(Exponent { re, gen, log: 0 })
}

pub fn exponent_from_json(g: &ExponentGroup, v: &Value) -> Result<Exponent> {
    let e = match v.get("alpha") {
        Some(alpha) => {
            let mut e = alpha_from_json(alpha)?;
            let beta = v.get("beta").ok_or_else(|| parse_err("pair exponent needs \"beta\""))?;
            let b = q_from_json(beta)? * Q::from_integer(g.beta_denominator());
            if !b.is_integer() {
                return Err(Error::NotInGroup(format!("beta {beta} off the lattice")));
            }
            e.log = b.to_integer();
            e
        }
        None => alpha_from_json(v)?,
    };
    g.check(&e)
}

/// Coefficient rings with a JSON encoding.
pub trait JsonCoeff: Sized {
    fn ring(&self) -> String;
    fn to_json(&self) -> Result<Value>;
}

pub trait JsonScalar: Scalar + JsonCoeff {
    const RING: &'static str;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonCoeff for BigRational {
    fn ring(&self) -> String {
        Self::RING.into()
    }
    fn to_json(&self) -> Result<Value> {
        Ok(big_rational_to_json(self))
    }
}

impl JsonScalar for BigRational {
    const RING: &'static str = "rational";
    fn from_json(v: &Value) -> Result<Self> {
        big_rational_from_json(v)
    }
}

fn finite(x: f64) -> Result<Value> {
    if x.is_finite() {
        Ok(json!(x))
    } else {
        Err(Error::Domain(format!("non-finite value {x} cannot be written")))
    }
}

impl JsonCoeff for Complex64 {
    fn ring(&self) -> String {
        Self::RING.into()
    }
    fn to_json(&self) -> Result<Value> {
        Ok(json!([finite(self.re)?, finite(self.im)?]))
    }
}

impl JsonScalar for Complex64 {
    const RING: &'static str = "complex";
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(a) if a.len() == 2 => {
                let re = a[0].as_f64().ok_or_else(|| parse_err("complex re"))?;
                let im = a[1].as_f64().ok_or_else(|| parse_err("complex im"))?;
                Ok(Complex64::new(re, im))
            }
            Value::Number(n) => Ok(Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            _ => Err(parse_err(format!("expected [re, im], got {v}"))),
        }
    }
}

impl<T: JsonScalar> JsonCoeff for SquareMatrix<T> {
    fn ring(&self) -> String {
        format!("matrix-{}", T::RING)
    }
    fn to_json(&self) -> Result<Value> {
        let rows: Result<Vec<Value>> =
            self.rows().iter().map(|r| r.iter().map(JsonCoeff::to_json).collect::<Result<Vec<_>>>().map(Value::from)).collect();
        Ok(Value::Array(rows?))
    }
}

fn matrix_from_json<T: JsonScalar>(v: &Value) -> Result<SquareMatrix<T>> {
    let rows = v.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    let rows: Result<Vec<Vec<T>>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| parse_err("matrix row must be an array"))?.iter().map(T::from_json).collect())
        .collect();
    SquareMatrix::from_rows(rows?)
}

fn series_doc<C: JsonCoeff + crate::coeff::Coefficient>(f: &Series<C>, ring: String) -> Result<Value> {
    let g = f.group();
    let terms: Result<Vec<Value>> =
        f.terms().iter().map(|(e, c)| Ok(json!({"exp": exponent_to_json(g, e), "coeff": c.to_json()?}))).collect();
    Ok(json!({
        "group": group_to_json(g),
        "ring": ring,
        "valid_below": f.valid_below().map_or(Value::Null, |v| exponent_to_json(g, v)),
        "terms": terms?,
    }))
}

pub fn series_to_json<C: JsonScalar>(f: &Series<C>) -> Result<Value> {
    series_doc(f, C::RING.into())
}

pub fn matrix_coeff_series_to_json<T: JsonScalar>(f: &Series<SquareMatrix<T>>) -> Result<Value> {
    series_doc(f, format!("matrix-{}", T::RING))
}

fn read_terms<C: crate::coeff::Coefficient>(
    v: &Value,
    coeff: impl Fn(&Value) -> Result<C>,
) -> Result<Series<C>> {
    let group = group_from_json(v.get("group").ok_or_else(|| parse_err("series needs \"group\""))?)?;
    let valid_below = match v.get("valid_below") {
        None | Some(Value::Null) => None,
        Some(e) => Some(exponent_from_json(&group, e)?),
    };
    let raw = v.get("terms").and_then(Value::as_array).ok_or_else(|| parse_err("series needs \"terms\""))?;
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        let e = exponent_from_json(&group, t.get("exp").ok_or_else(|| parse_err("term needs \"exp\""))?)?;
        terms.push((e, coeff(t.get("coeff").ok_or_else(|| parse_err("term needs \"coeff\""))?)?));
    }
    Series::new(group, terms, valid_below)
}

pub fn series_from_json<C: JsonScalar>(v: &Value) -> Result<Series<C>> {
    if let Some(r) = v.get("ring").and_then(Value::as_str) {
        if r != C::RING {
            return Err(parse_err(format!("expected ring {}, document has {r}", C::RING)));
        }
    }
    read_terms(v, C::from_json)
}

pub fn matrix_coeff_series_from_json<T: JsonScalar>(v: &Value) -> Result<Series<SquareMatrix<T>>> {
    read_terms(v, matrix_from_json::<T>)
}

/// A series document of either scalar ring; `"ring"` defaults to rational.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Rational(Series<BigRational>),
    Complex(Series<Complex64>),
}

impl AnySeries {
    pub fn from_json(v: &Value) -> Result<Self> {
        match v.get("ring").and_then(Value::as_str).unwrap_or("rational") {
            "rational" => Ok(AnySeries::Rational(series_from_json(v)?)),
            "complex" => Ok(AnySeries::Complex(series_from_json(v)?)),
            r => Err(parse_err(format!("unsupported ring {r}"))),
        }
    }

    pub fn to_json(&self) -> Result<Value> {
        match self {
            AnySeries::Rational(s) => series_to_json(s),
            AnySeries::Complex(s) => series_to_json(s),
        }
    }

    pub fn to_complex(&self) -> Series<Complex64> {
        match self {
            AnySeries::Rational(s) => s.convert(|c| c.to_complex()),
            AnySeries::Complex(s) => s.clone(),
        }
    }
}

pub fn matrix_series_to_json<C: JsonScalar>(m: &MatrixSeries<C>) -> Result<Value> {
    let rows: Result<Vec<Value>> = m
        .entries()
        .iter()
        .map(|r| r.iter().map(series_to_json).collect::<Result<Vec<_>>>().map(Value::from))
        .collect();
    Ok(json!({"dim": m.dim(), "entries": rows?}))
}

pub fn matrix_series_from_json<C: JsonScalar>(v: &Value) -> Result<MatrixSeries<C>> {
    let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| parse_err("matrix series needs \"dim\""))? as usize;
    let rows = v.get("entries").and_then(Value::as_array).ok_or_else(|| parse_err("matrix series needs \"entries\""))?;
    if rows.len() != dim {
        return Err(Error::DimensionMismatch(format!("dim {dim} but {} rows", rows.len())));
    }
    let entries: Result<Vec<Vec<Series<C>>>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| parse_err("row must be an array"))?.iter().map(series_from_json).collect())
        .collect();
    MatrixSeries::new(entries?)
}

/// `{"pivot": exp, "unit": series}`; the value is `e_pivot * unit`.
pub fn meromorphic_to_json<C: JsonScalar>(h: &Meromorphic<C>) -> Result<Value> {
    Ok(json!({
        "pivot": exponent_to_json(h.group(), h.pivot()),
        "unit": series_to_json(h.unit())?,
    }))
}

pub fn meromorphic_from_json<C: JsonScalar>(v: &Value) -> Result<Meromorphic<C>> {
    let unit: Series<C> = series_from_json(v.get("unit").ok_or_else(|| parse_err("meromorphic needs \"unit\""))?)?;
    let pivot = exponent_from_json(unit.group(), v.get("pivot").ok_or_else(|| parse_err("meromorphic needs \"pivot\""))?)?;
    Meromorphic::from_parts(pivot, unit)
}

pub fn resolution_to_json<C: JsonScalar>(g: &ExponentGroup, r: &Resolution<C>) -> Result<Value> {
    match r {
        Resolution::Invertible(MeromorphicMatrix { denom, numer }) => Ok(json!({
            "status": "invertible",
            "denom": series_to_json(denom)?,
            "numer": matrix_series_to_json(numer)?,
        })),
        Resolution::NowhereInvertible { valid_below } => {
            let vb = valid_below.as_ref().map_or(Value::Null, |e| exponent_to_json(g, e));
            Ok(json!({"status": "nowhere_invertible", "valid_below": vb}))
        }
    }
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": e.kind(), "message": e.to_string()})
}

pub fn bound_check_to_json(c: &BoundCheck) -> Value {
    json!({"part": c.part, "k": c.k, "R": c.radius, "lhs": c.lhs, "rhs": c.rhs, "pass": c.pass})
}

pub fn kernel_to_json(k: &KernelExpansion) -> Result<Value> {
    let g = k.series.group();
    let support: Vec<Value> = k.series.terms().iter().map(|(e, _)| exponent_to_json(g, e)).collect();
    Ok(json!({
        "nu": k.nu.to_string(),
        "x": k.x,
        "y": k.y,
        "branch": k.branch.name(),
        "terms": k.terms,
        "support": support,
        "series": series_to_json(&k.series)?,
    }))
}

pub fn hs_report_to_json(r: &HsReport) -> Value {
    json!({
        "part": r.part, "k": r.k, "R": r.radius, "weight": r.weight.name(),
        "quad": r.quad, "tail": r.tail, "lhs": r.lhs, "constant": r.constant,
        "rhs": r.rhs, "pass": r.pass, "assembly": r.assembly,
    })
}

pub fn suitability_to_json(r: &SuitabilityReport) -> Value {
    let witnesses: Vec<Value> = r.witnesses.iter().map(|(nu, v)| json!({"nu": nu, "value": v})).collect();
    let gap = r.gap.as_ref().map_or(Value::Null, |g| {
        json!({
            "checked": g.checked, "gap_violations": g.gap_violations,
            "max_inv_nu1_sin": g.max_first, "max_inv_nu_sin": g.max_second,
            "bound_violations": g.bound_violations,
        })
    });
    json!({
        "kappa": r.kappa, "bound": r.bound, "non_integer": r.non_integer,
        "sup_observed": r.sup_observed, "pass": r.pass, "witnesses": witnesses, "gap": gap,
    })
}

pub fn cone_to_json(c: &ConeKernel) -> Result<Value> {
    let modes: Result<Vec<Value>> = c
        .modes
        .iter()
        .map(|m| Ok(json!({"multiplicity": m.multiplicity, "kernel": kernel_to_json(&m.expansion)?})))
        .collect();
    let lex = ExponentGroup::lex_integers();
    let negative: Vec<Value> = c.support.negative.iter().map(|e| exponent_to_json(&lex, e)).collect();
    let exps: Vec<Value> = c.support.exponents.iter().map(|(a, b)| json!([a, b])).collect();
    Ok(json!({
        "modes": modes?,
        "support": {
            "exponents": exps,
            "negative": negative,
            "holomorphic": c.support.holomorphic,
            "consistent": c.support.consistent,
        },
    }))
}
