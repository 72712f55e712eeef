use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use hahn::bessel::bounds::{coeff_bound_sweep, hs_bound_check, BoundConfig, BoundForm, HsConfig, Weight};
use hahn::bessel::cone::{cone_kernel_modes, kappa_suitable, OrderFamily};
use hahn::bessel::kernel::{resolvent_kernel_direct, resolvent_kernel_series};
use hahn::eval::{extract_coefficient, majorant, meromorphic_eval, series_eval, series_value, Evaluation};
use hahn::fredholm::{
    compare_with_direct_inverse, resolve_identity_minus_with_cap, verify_inverse, MatrixSeries, Resolution,
};
use hahn::json::{
    bound_check_to_json, cone_to_json, exponent_to_json, hs_report_to_json, kernel_to_json, meromorphic_from_json,
    meromorphic_to_json, resolution_to_json, series_to_json, suitability_to_json, AnySeries, JsonScalar,
};
use hahn::meromorphic::divide_scalar;
use hahn::{Error, LogPoint, Meromorphic, Scalar, SectorDisc, Series, TailModel};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::*;

type Out = Result<String, CliError>;

pub fn dispatch(cli: &Cli) -> Out {
    match &cli.command {
        Command::Mul(a) => mul(a),
        Command::Invert(a) => invert(a),
        Command::Compose(a) => compose(a),
        Command::Divide(a) => divide(a),
        Command::Eval(a) => eval(a),
        Command::Majorant(a) => majorant_cmd(a),
        Command::Extract(a) => extract(a),
        Command::Fredholm(a) => fredholm(a, cli.seed),
        Command::Bessel(a) => bessel(a),
        Command::Cone(a) => cone(a),
        Command::Suitability(a) => suitability(a),
        Command::Hsbound(a) => hsbound(a),
    }
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())).into())
}

fn read_series(path: &Path) -> Result<AnySeries, CliError> {
    Ok(AnySeries::from_json(&read_json(path)?)?)
}

fn emit(v: &Value) -> Out {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Finite numbers as numbers, anything else as `null`.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn with_order<C: Scalar>(s: Series<C>, order: &Option<String>) -> Result<Series<C>, CliError> {
    match order {
        None => Ok(s),
        Some(text) => {
            let e = parse::exponent(s.group(), text).map_err(|m| CliError::Usage(format!("--order: {m}")))?;
            Ok(s.truncate(e)?)
        }
    }
}

fn insert(v: &mut Value, key: &str, item: Value) {
    if let Value::Object(m) = v {
        m.insert(key.into(), item);
    }
}

fn mul(a: &MulArgs) -> Out {
    if a.inputs.len() != 2 {
        return Err(CliError::Usage(format!("mul takes exactly two --in files, got {}", a.inputs.len())));
    }
    let (f, g) = (read_series(&a.inputs[0])?, read_series(&a.inputs[1])?);
    let v = match (f, g) {
        (AnySeries::Rational(f), AnySeries::Rational(g)) => series_to_json(&f.mul(&g)?)?,
        (f, g) => series_to_json(&f.to_complex().mul(&g.to_complex())?)?,
    };
    emit(&v)
}

fn invert_one<C: JsonScalar>(f: Series<C>, a: &InvertArgs) -> Result<Value, CliError> {
    let f = with_order(f, &a.order)?;
    Ok(series_to_json(&f.neumann_invert_with_cap(a.cap)?)?)
}

fn invert(a: &InvertArgs) -> Out {
    let v = match read_series(&a.input)? {
        AnySeries::Rational(f) => invert_one(f, a)?,
        AnySeries::Complex(f) => invert_one(f, a)?,
    };
    emit(&v)
}

fn factorial(k: usize) -> BigRational {
    (1..=k).fold(BigRational::from_integer(1.into()), |acc, j| acc * BigRational::from_integer(j.into()))
}

fn named_coeffs(n: Named, kmax: usize) -> Vec<BigRational> {
    let zero = BigRational::from_integer(0.into());
    (0..kmax)
        .map(|k| match n {
            Named::Exp => factorial(k).recip(),
            Named::Geometric => BigRational::from_integer(1.into()),
            Named::Cos if k % 2 == 1 => zero.clone(),
            Named::Cos => {
                let c = factorial(k).recip();
                if k % 4 == 2 {
                    -c
                } else {
                    c
                }
            }
        })
        .collect()
}

fn compose_one<C: JsonScalar>(f: Series<C>, coeffs: &[BigRational], a: &ComposeArgs) -> Result<Value, CliError> {
    let f = with_order(f, &a.order)?;
    let cs: Vec<C> = coeffs.iter().map(C::from_rational).collect();
    Ok(series_to_json(&Series::compose_entire_with_cap(&cs, &f, a.cap)?)?)
}

fn compose(a: &ComposeArgs) -> Out {
    let coeffs = match (&a.coeffs, a.named) {
        (Some(c), _) => c.clone(),
        (None, Some(n)) => named_coeffs(n, a.kmax),
        (None, None) => return Err(CliError::Usage("give --coeffs or --named".into())),
    };
    let v = match read_series(&a.input)? {
        AnySeries::Rational(f) => compose_one(f, &coeffs, a)?,
        AnySeries::Complex(f) => compose_one(f, &coeffs, a)?,
    };
    emit(&v)
}

fn divide_one<C: JsonScalar>(f: Series<C>, g: Series<C>, order: &Option<String>) -> Result<Value, CliError> {
    let (f, g) = (with_order(f, order)?, with_order(g, order)?);
    let h = divide_scalar(&f, &g)?;
    let mut v = meromorphic_to_json(&h)?;
    insert(&mut v, "holomorphic", json!(h.is_holomorphic()?));
    insert(&mut v, "expansion", series_to_json(&h.to_series()?)?);
    Ok(v)
}

fn divide(a: &DivideArgs) -> Out {
    let v = match (read_series(&a.num)?, read_series(&a.den)?) {
        (AnySeries::Rational(f), AnySeries::Rational(g)) => divide_one(f, g, &a.order)?,
        (f, g) => divide_one(f.to_complex(), g.to_complex(), &a.order)?,
    };
    emit(&v)
}

fn tail_model(text: &Option<String>) -> Result<TailModel, CliError> {
    let Some(t) = text else {
        return Ok(TailModel::TruncationOnly);
    };
    let parts: Vec<f64> = t
        .split(',')
        .map(parse::real)
        .collect::<Result<_, _>>()
        .map_err(|m| CliError::Usage(format!("--tail-geometric: {m}")))?;
    match parts[..] {
        [first, ratio] if first >= 0.0 && ratio >= 0.0 => Ok(TailModel::Geometric { first, ratio }),
        _ => Err(CliError::Usage(format!("--tail-geometric wants FIRST,RATIO with both >= 0, got {t}"))),
    }
}

/// A document with `pivot` and `unit` is a quotient; anything else a series.
fn evaluator(doc: &Value) -> Result<Box<dyn Fn(&LogPoint, &TailModel) -> hahn::Result<Evaluation>>, CliError> {
    if let Some(unit) = doc.get("unit") {
        let h: Meromorphic<Complex64> = match unit.get("ring").and_then(Value::as_str) {
            Some("complex") => meromorphic_from_json(doc)?,
            _ => {
                let h: Meromorphic<BigRational> = meromorphic_from_json(doc)?;
                Meromorphic::from_parts(*h.pivot(), h.unit().convert(|c| c.to_complex()))?
            }
        };
        return Ok(Box::new(move |p, t| meromorphic_eval(&h, p, t)));
    }
    let f = AnySeries::from_json(doc)?.to_complex();
    Ok(Box::new(move |p, t| series_eval(&f, p, t)))
}

fn eval(a: &EvalArgs) -> Out {
    let points = a.at.collect();
    if points.is_empty() {
        return Err(CliError::Usage("eval needs at least one --point, --ray or --arc".into()));
    }
    let tail = tail_model(&a.tail_geometric)?;
    let f = evaluator(&read_json(&a.input)?)?;
    let mut out = String::from("r,phi,re,im,residual_bound\n");
    for p in &points {
        let v = f(p, &tail)?;
        let _ = writeln!(out, "{:?},{:?},{:?},{:?},{:?}", p.r, p.phi, v.value.re, v.value.im, v.residual_bound);
    }
    Ok(out)
}

fn majorant_cmd(a: &MajorantArgs) -> Out {
    if !(a.radius > 0.0) || a.sigma.is_some_and(|s| !(s > 0.0)) {
        return Err(CliError::Usage("--radius and --sigma must be positive".into()));
    }
    let f = read_series(&a.input)?.to_complex();
    let m = majorant(&f, &SectorDisc { radius: a.radius, sigma: a.sigma }, a.samples);
    emit(&json!({
        "radius": a.radius,
        "sigma": a.sigma.map_or(Value::Null, |s| json!(s)),
        "samples": a.samples,
        "majorant": num(m),
        "finite": m.is_finite(),
    }))
}

fn extract(a: &ExtractArgs) -> Out {
    if a.turns == 0 || a.nodes == 0 || !(a.radius > 0.0) {
        return Err(CliError::Usage("--turns, --nodes and --radius must be positive".into()));
    }
    let f = read_series(&a.input)?.to_complex();
    let g = f.group().clone();
    let alpha = parse::exponent(&g, &a.alpha).map_err(|m| CliError::Usage(format!("--alpha: {m}")))?;
    let stored = f.coeff(&alpha).copied().unwrap_or_default();
    let value = |p: LogPoint| series_value(&f, &p).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let mut levels = Vec::new();
    let mut errors = Vec::new();
    for turns in [a.turns, 2 * a.turns] {
        let c = extract_coefficient(value, &g, &alpha, a.radius, turns, a.nodes)?;
        let err = (c - stored).norm();
        errors.push(err);
        levels.push(json!({"turns": turns, "value": complex(c), "error": num(err)}));
    }
    let ratio = if errors[0] > 0.0 { num(errors[1] / errors[0]) } else { Value::Null };
    emit(&json!({
        "alpha": exponent_to_json(&g, &alpha),
        "radius": a.radius,
        "nodes_per_turn": a.nodes,
        "stored": complex(stored),
        "levels": levels,
        "error_ratio": ratio,
    }))
}

fn matrix_of<C: JsonScalar>(rows: Vec<Vec<Series<C>>>) -> Result<MatrixSeries<C>, CliError> {
    Ok(MatrixSeries::new(rows)?)
}

fn fredholm_one<C: JsonScalar>(m: MatrixSeries<C>, points: &[LogPoint], cap: usize) -> Result<Value, CliError> {
    let r = resolve_identity_minus_with_cap(&m, cap)?;
    let mut v = resolution_to_json(m.group(), &r)?;
    insert(&mut v, "dim", json!(m.dim()));
    if let Resolution::Invertible(g) = &r {
        // the quotient expansion can exceed the iteration cap where the inverse itself is fine
        insert(&mut v, "holomorphic", g.is_holomorphic().map_or(Value::Null, Value::Bool));
        let pts: Vec<Value> = points.iter().map(|p| json!([p.r, p.phi])).collect();
        insert(
            &mut v,
            "check",
            json!({
                "points": pts,
                "residual": num(verify_inverse(&m, g, points)?),
                "direct_difference": num(compare_with_direct_inverse(&m, g, points)?),
            }),
        );
    }
    Ok(v)
}

fn fredholm(a: &FredholmArgs, seed: u64) -> Out {
    if !(a.sample_radius > 0.0 && a.sigma > 0.0) {
        return Err(CliError::Usage("--sample-radius and --sigma must be positive".into()));
    }
    let doc = read_json(&a.input)?;
    let dim = doc.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Parse("matrix series needs \"dim\"".into()))?;
    let rows = doc.get("entries").and_then(Value::as_array).ok_or_else(|| Error::Parse("matrix series needs \"entries\"".into()))?;
    if rows.len() as u64 != dim {
        return Err(Error::DimensionMismatch(format!("dim {dim} but {} rows", rows.len())).into());
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::Parse("row must be an array".into()))?;
        parsed.push(r.iter().map(AnySeries::from_json).collect::<hahn::Result<Vec<_>>>()?);
    }
    let points = if a.points.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..a.samples)
            .map(|_| LogPoint { r: a.sample_radius * rng.gen_range(0.2..1.0), phi: rng.gen_range(-a.sigma..a.sigma) })
            .collect()
    } else {
        a.points.clone()
    };
    let all_rational = parsed.iter().flatten().all(|s| matches!(s, AnySeries::Rational(_)));
    let v = if all_rational {
        let rows = parsed
            .into_iter()
            .map(|r| r.into_iter().map(|s| if let AnySeries::Rational(s) = s { s } else { unreachable!() }).collect())
            .collect();
        fredholm_one(matrix_of::<BigRational>(rows)?, &points, a.cap)?
    } else {
        let rows = parsed.iter().map(|r| r.iter().map(AnySeries::to_complex).collect()).collect();
        fredholm_one(matrix_of::<Complex64>(rows)?, &points, a.cap)?
    };
    emit(&v)
}

fn bessel(a: &BesselArgs) -> Out {
    let mut lambdas = a.lambdas.clone();
    lambdas.extend(a.ray.iter().flat_map(Ray::points));
    if a.csv && lambdas.is_empty() {
        return Err(CliError::Usage("--csv needs at least one --lambda or --ray".into()));
    }
    let k = resolvent_kernel_series(&a.nu, a.x, a.y, a.terms)?;
    if a.csv {
        let mut out = String::from("lambda_r,lambda_phi,re,im,abs_diff\n");
        for p in &lambdas {
            let s = series_value(&k.series, p)?;
            let d = resolvent_kernel_direct(&a.nu, p, a.x, a.y)?;
            let _ = writeln!(out, "{:?},{:?},{:?},{:?},{:?}", p.r, p.phi, s.re, s.im, (s - d).norm());
        }
        return Ok(out);
    }
    let mut v = kernel_to_json(&k)?;
    insert(&mut v, "even_support", json!(k.support_is_even()));
    let mut evals = Vec::new();
    for p in &lambdas {
        let s = series_value(&k.series, p)?;
        let mut m = Map::new();
        m.insert("lambda".into(), json!([p.r, p.phi]));
        m.insert("value".into(), complex(s));
        if a.check_direct {
            let d = resolvent_kernel_direct(&a.nu, p, a.x, a.y)?;
            m.insert("direct".into(), complex(d));
            m.insert("abs_diff".into(), num((s - d).norm()));
            m.insert("rel_error".into(), num((s - d).norm() / d.norm()));
        }
        evals.push(Value::Object(m));
    }
    insert(&mut v, "evaluations", Value::Array(evals));
    if a.bounds {
        let form = match a.form {
            Form::Displayed => BoundForm::Displayed,
            Form::Proof => BoundForm::Proof,
        };
        let cfg = BoundConfig { c: a.c, r0: a.r0, form };
        let checks = coeff_bound_sweep(&a.nu, a.x, a.y, a.kmax, &a.radii, &cfg)?;
        let failures = checks.iter().filter(|c| !c.pass).count();
        insert(
            &mut v,
            "bounds",
            json!({
                "form": match a.form { Form::Displayed => "displayed", Form::Proof => "proof" },
                "c": a.c,
                "r0": a.r0,
                "checks": checks.iter().map(bound_check_to_json).collect::<Vec<_>>(),
                "failures": failures,
                "pass": failures == 0,
            }),
        );
    }
    emit(&v)
}

fn family(f: &FamilyArgs) -> Result<OrderFamily, CliError> {
    Ok(match f.family {
        FamilyKind::SqrtIntegers => OrderFamily::SqrtIntegers { q_max: f.qmax },
        FamilyKind::Sphere => OrderFamily::SphereSpectrum { n: f.n, k_max: f.k_max },
        FamilyKind::List => match &f.orders {
            Some(o) if !o.is_empty() => OrderFamily::ExplicitList(o.clone()),
            _ => return Err(CliError::Usage("--family list needs --orders".into())),
        },
    })
}

fn cone(a: &ConeArgs) -> Out {
    let c = cone_kernel_modes(&family(&a.family)?, a.x, a.y, a.terms)?;
    let mut v = cone_to_json(&c)?;
    if a.summary {
        if let Value::Object(m) = &mut v {
            m.remove("modes");
            m.insert("mode_count".into(), json!(c.modes.len()));
        }
    }
    emit(&v)
}

fn suitability(a: &SuitabilityArgs) -> Out {
    let r = kappa_suitable(&family(&a.family)?, a.kappa, a.bound)?;
    emit(&suitability_to_json(&r))
}

fn hsbound(a: &HsboundArgs) -> Out {
    let weight = match a.weight {
        WeightKind::Exponential => Weight::Exponential,
        WeightKind::Gaussian => Weight::Gaussian,
    };
    let mut cfg = HsConfig::standard(a.kappa, a.c, weight);
    if let Some(r) = a.radius {
        cfg.radius = r;
    }
    if let Some(cut) = a.cut {
        cfg.cut = cut;
    }
    if let Some(p) = a.panels_per_unit {
        cfg.panels_per_unit = p;
    }
    if let Some(n) = a.nodes {
        cfg.nodes = n;
    }
    let parts: Vec<usize> = match a.part {
        Some(p) => vec![p as usize],
        None => vec![1, 2],
    };
    let mut reports = Vec::new();
    let mut pass = true;
    for j in parts {
        let r = hs_bound_check(&a.nu, j, a.k, &cfg)?;
        pass &= r.pass;
        reports.push(hs_report_to_json(&r));
    }
    emit(&json!({
        "nu": a.nu.to_string(),
        "k": a.k,
        "kappa": cfg.kappa,
        "c": cfg.c,
        "R": cfg.radius,
        "cut": cfg.cut,
        "weight": cfg.weight.name(),
        "reports": reports,
        "pass": pass,
    }))
}
