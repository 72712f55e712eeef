use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hahn::json::{series_from_json, AnySeries};
use hahn::Series;
use num_rational::BigRational;
use serde_json::{json, Value};
use tempfile::TempDir;

fn hahn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hahn")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "exit {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn one_minus_sqrt_z() -> Value {
    json!({
        "group": {"kind": "rational_line"},
        "valid_below": null,
        "terms": [
            {"exp": {"a": [0, 1]}, "coeff": [1, 1]},
            {"exp": {"a": [1, 2]}, "coeff": [-1, 1]},
        ],
    })
}

fn lex_series(terms: &[((i64, i64), i64, (i64, i64))]) -> Value {
    let t: Vec<Value> = terms
        .iter()
        .map(|((p, q), b, (n, d))| json!({"exp": {"alpha": {"a": [p, q]}, "beta": b}, "coeff": [n, d]}))
        .collect();
    json!({"group": {"kind": "lex_pair"}, "valid_below": {"alpha": {"a": [6, 1]}, "beta": 0}, "terms": t})
}

#[test]
fn invert_gives_the_geometric_series() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &one_minus_sqrt_z());
    let v = stdout_json(&hahn(&["invert", "--in", s(&f), "--order", "3"]));
    assert_eq!(v["valid_below"], json!({"a": [3, 1]}));
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 6);
    for (k, t) in terms.iter().enumerate() {
        let e = hahn::json::exponent_from_json(&hahn::ExponentGroup::RationalLine, &t["exp"]).unwrap();
        assert_eq!(e, hahn::Exponent::ratio(k as i64, 2));
        assert_eq!(t["coeff"], json!([1, 1]));
    }
}

#[test]
fn emitted_series_reparse_to_the_computed_value() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "f.json", &one_minus_sqrt_z());
    let f: Series<BigRational> = series_from_json(&one_minus_sqrt_z()).unwrap();

    let v = stdout_json(&hahn(&["invert", "--in", s(&path), "--order", "5/2"]));
    let back: Series<BigRational> = series_from_json(&v).unwrap();
    assert_eq!(back, f.truncate(hahn::Exponent::ratio(5, 2)).unwrap().neumann_invert().unwrap());

    let v = stdout_json(&hahn(&["mul", "--in", s(&path), "--in", s(&path)]));
    assert_eq!(AnySeries::from_json(&v).unwrap(), AnySeries::Rational(f.mul(&f).unwrap()));
}

#[test]
fn bessel_half_integer_matches_the_closed_form() {
    let v = stdout_json(&hahn(&[
        "bessel", "--nu", "1/2", "--x", "1", "--y", "2", "--terms", "25", "--check-direct", "--lambda", "0.05,0",
    ]));
    assert_eq!(v["branch"], "NonInteger");
    assert_eq!(v["even_support"], true);
    let e = &v["evaluations"][0];
    assert!(e["rel_error"].as_f64().unwrap() <= 1e-10, "{e}");
}

#[test]
fn bessel_bound_sweep_and_csv() {
    let v = stdout_json(&hahn(&["bessel", "--nu", "2", "--x", "1", "--y", "2", "--bounds", "--kmax", "20"]));
    assert_eq!(v["bounds"]["failures"], 0);
    assert_eq!(v["bounds"]["checks"].as_array().unwrap().len(), 2 * 21 * 3);

    let o = hahn(&["bessel", "--nu", "1", "--x", "1", "--y", "2", "--csv", "--lambda", "0.05,pi/6", "--ray", "0.01,0.1,4,0"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_r,lambda_phi,re,im,abs_diff"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!(r[4] <= 1e-8 * (r[2] * r[2] + r[3] * r[3]).sqrt());
    }
}

#[test]
fn suitability_of_square_roots() {
    let v = stdout_json(&hahn(&["suitability", "--family", "sqrt-integers", "--qmax", "1000000", "--kappa", "1"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["gap"]["gap_violations"], 0);
    assert_eq!(v["gap"]["bound_violations"], 0);
    assert_eq!(v["gap"]["checked"], 1_000_001 - 1001);
}

#[test]
fn cone_support_on_the_circle_and_sphere() {
    let v = stdout_json(&hahn(&["cone", "--family", "sphere", "--n", "1", "--modes", "8", "--summary"]));
    assert_eq!(v["support"]["negative"], json!([{"alpha": {"a": [0, 1]}, "beta": -1}]));
    assert_eq!(v["support"]["consistent"], true);
    let v = stdout_json(&hahn(&["cone", "--family", "sphere", "--n", "2", "--modes", "8", "--summary"]));
    assert_eq!(v["support"]["holomorphic"], true);
    assert_eq!(v["mode_count"], 9);
}

#[test]
fn fredholm_reports_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = json!({"dim": 2, "entries": [
        [lex_series(&[((1, 2), 0, (1, 2))]), lex_series(&[((1, 1), -1, (1, 1))])],
        [lex_series(&[((1, 1), 0, (2, 1))]), lex_series(&[((1, 2), 0, (-1, 3)), ((3, 2), 0, (1, 1))])],
    ]});
    let p = write(&dir, "F.json", &f);
    let a = hahn(&["fredholm", "--in", s(&p), "--seed", "7"]);
    let b = hahn(&["fredholm", "--in", s(&p), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["status"], "invertible");
    assert_eq!(v["check"]["points"].as_array().unwrap().len(), 5);
    assert!(v["check"]["residual"].as_f64().unwrap() <= 1e-10);
    assert!(v["check"]["direct_difference"].as_f64().unwrap() <= 1e-10);

    let c = hahn(&["fredholm", "--in", s(&p), "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);

    let id = json!({"dim": 2, "entries": [
        [lex_series(&[((0, 1), 0, (1, 1))]), lex_series(&[])],
        [lex_series(&[]), lex_series(&[((0, 1), 0, (1, 1))])],
    ]});
    let p = write(&dir, "I.json", &id);
    let v = stdout_json(&hahn(&["fredholm", "--in", s(&p)]));
    assert_eq!(v["status"], "nowhere_invertible");
}

#[test]
fn eval_and_extract() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "f.json",
        &json!({
            "group": {"kind": "rational_plus_generator", "generator": "pi"},
            "valid_below": null,
            "terms": [
                {"exp": {"a": [0, 1]}, "coeff": [1, 1]},
                {"exp": {"a": [1, 2]}, "coeff": [2, 1]},
                {"exp": {"a": [0, 1], "b": [1, 1]}, "coeff": [3, 1]},
            ],
        }),
    );
    let o = hahn(&["eval", "--in", s(&f), "--point", "0.25,0", "--arc", "0.5,0,2pi,3"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "r,phi,re,im,residual_bound");
    assert_eq!(rows.len(), 5);
    let first: Vec<f64> = rows[1].split(',').map(|x| x.parse().unwrap()).collect();
    let expected = 1.0 + 2.0 * 0.5 + 3.0 * 0.25f64.powf(std::f64::consts::PI);
    assert!((first[2] - expected).abs() < 1e-14);

    for (alpha, stored) in [("0", 1.0), ("1/2", 2.0), ("pi", 3.0)] {
        let v = stdout_json(&hahn(&["extract", "--in", s(&f), "--alpha", alpha, "--radius", "0.5", "--turns", "256"]));
        assert_eq!(v["stored"], json!([stored, 0.0]));
        assert!(v["error_ratio"].as_f64().unwrap() <= 0.75, "{v}");
    }
}

#[test]
fn divide_and_compose() {
    let dir = TempDir::new().unwrap();
    let zlogz = write(&dir, "zlogz.json", &lex_series(&[((1, 1), -1, (-1, 1))]));
    let z = write(&dir, "z.json", &lex_series(&[((1, 1), 0, (1, 1))]));
    let v = stdout_json(&hahn(&["divide", "--num", s(&zlogz), "--den", s(&z)]));
    // log z = -e_(0,-1)
    assert_eq!(v["expansion"]["terms"], json!([{"exp": {"alpha": {"a": [0, 1]}, "beta": -1}, "coeff": [-1, 1]}]));
    assert_eq!(v["holomorphic"], false);

    let h = write(&dir, "h.json", &json!({
        "group": {"kind": "rational_line"},
        "valid_below": {"a": [3, 1]},
        "terms": [{"exp": {"a": [1, 2]}, "coeff": [1, 1]}],
    }));
    let geo = stdout_json(&hahn(&["compose", "--in", s(&h), "--named", "geometric"]));
    let f = write(&dir, "f.json", &one_minus_sqrt_z());
    let inv = stdout_json(&hahn(&["invert", "--in", s(&f), "--order", "3"]));
    assert_eq!(geo, inv);
}

#[test]
fn hsbound_passes_for_the_standard_radii() {
    for weight in ["exponential", "gaussian"] {
        let v = stdout_json(&hahn(&["hsbound", "--nu", "1/2", "--k", "5", "--weight", weight]));
        assert_eq!(v["pass"], true, "{v}");
        assert_eq!(v["reports"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn exit_codes_and_error_documents() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.json", &one_minus_sqrt_z());

    let o = hahn(&["invert", "--in", s(&f)]);
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "UnboundedValidity");

    let o = hahn(&["bessel", "--nu", "1.0000000001", "--x", "1", "--y", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "NearIntegerOrder");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let o = hahn(&["invert", "--in", s(&bad), "--order", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "ParseError");

    assert_eq!(hahn(&["bessel", "--nu", "1/2", "--x", "1"]).status.code(), Some(2));
    assert_eq!(hahn(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hahn(&["invert", "--in", s(&f), "--order", "x"]).status.code(), Some(2));
    assert_eq!(hahn(&["eval", "--in", s(&f)]).status.code(), Some(2));
    assert_eq!(hahn(&["mul", "--in", s(&f)]).status.code(), Some(2));
    assert!(hahn(&["--help"]).status.success());
}

#[test]
fn out_flag_and_generator_digits() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k.json");
    let o = hahn(&["bessel", "--nu", "pi", "--x", "1", "--y", "2", "--terms", "4", "--out", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let default_nu = v["nu"].as_str().unwrap().to_string();

    let o = Command::new(env!("CARGO_BIN_EXE_hahn"))
        .args(["bessel", "--nu", "pi", "--x", "1", "--y", "2", "--terms", "4"])
        .env("HAHN_GENERATOR_DIGITS", "30")
        .output()
        .unwrap();
    let v = stdout_json(&o);
    assert_ne!(v["nu"].as_str().unwrap(), default_nu);
}
