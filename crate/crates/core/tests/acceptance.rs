//! Acceptance criteria, one line per criterion. Runs without the libtest harness.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use hahn::bessel::bounds::{coeff_bound_sweep, BoundForm, hs_bound_check, BoundConfig, HsConfig, Weight};
use hahn::bessel::cone::{cone_kernel_modes, kappa_suitable, OrderFamily};
use hahn::bessel::kernel::{resolvent_kernel_direct, resolvent_kernel_series};
use hahn::bessel::Order;
use hahn::eval::{extract_coefficient, series_eval, series_value};
use hahn::exponent::Q;
use hahn::fredholm::{compare_with_direct_inverse, resolve_identity_minus, verify_inverse, MatrixSeries, Resolution};
use hahn::{Exponent, ExponentGroup, GeneratorEnclosure, LogPoint, Series, TailModel};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn c1_neumann_zlogz() -> Outcome {
    let g = ExponentGroup::lex_integers();
    let f = Series::new(
        g,
        vec![(Exponent::zero(), q(1, 1)), (Exponent::int_pair(1, -1), q(-1, 1))],
        Some(Exponent::int_pair(21, -21)),
    )
    .unwrap();
    let inv = f.neumann_invert().unwrap();
    let mut exact = inv.terms().len() == 21;
    for n in 0..=20 {
        exact &= inv.coeff(&Exponent::int_pair(n, -n)) == Some(&q(1, 1));
    }
    let z = LogPoint::new(0.1, 0.0).unwrap();
    let ratio = 0.1 * 10f64.ln();
    let tail = TailModel::Geometric { first: ratio.powi(21), ratio };
    let ev = series_eval(&inv, &z, &tail).unwrap();
    let target = Complex64::new(1.0 / (1.0 + 0.1 * 0.1f64.ln()), 0.0);
    let err = (ev.value - target).norm();
    let ok = err <= 1e-10 * target.norm() + ev.residual_bound;
    outcome(exact && ok, format!("21 unit coefficients: {exact}, |err| = {err:.2e}, tail = {:.2e}", ev.residual_bound))
}

fn c2_ring_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0;
    let mut worst = 0.0f64;
    for (_, g) in groups() {
        for _ in 0..200 {
            let f = random_rational(&mut rng, &g, true);
            let h = random_rational(&mut rng, &g, false);
            let k = random_rational(&mut rng, &g, true);
            let assoc_add = f.add(&h).unwrap().add(&k).unwrap().eq_mod_validity(&f.add(&h.add(&k).unwrap()).unwrap()).unwrap();
            let assoc_mul = f.mul(&h).unwrap().mul(&k).unwrap().eq_mod_validity(&f.mul(&h.mul(&k).unwrap()).unwrap()).unwrap();
            let dist = f
                .mul(&h.add(&k).unwrap())
                .unwrap()
                .eq_mod_validity(&f.mul(&h).unwrap().add(&f.mul(&k).unwrap()).unwrap())
                .unwrap();
            let one = Series::constant(g.clone(), q(1, 1), None).unwrap();
            let inv_ok = f.mul(&f.neumann_invert().unwrap()).unwrap().eq_mod_validity(&one).unwrap();
            if !(assoc_add && assoc_mul && dist && inv_ok) {
                failures += 1;
            }

            let fc = random_complex(&mut rng, &g, true);
            let prod = fc.mul(&fc.neumann_invert().unwrap()).unwrap();
            let one_c = Series::constant(g.clone(), Complex64::new(1.0, 0.0), prod.valid_below().copied()).unwrap();
            let e = max_coeff_error(&prod, &one_c);
            worst = worst.max(e);
            if e > 1e-12 {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("600 rational + 600 complex cases, failures = {failures}, worst complex residual = {worst:.2e}"))
}

fn c3_compose_vs_neumann() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let geometric = vec![q(1, 1); 64];
    let mut failures = 0;
    for i in 0..50 {
        let (_, g) = &groups()[i % 3];
        let h = random_rational(&mut rng, g, false);
        let composed = Series::compose_entire(&geometric, &h).unwrap();
        let one = Series::constant(g.clone(), q(1, 1), None).unwrap();
        let inverted = one.sub(&h).unwrap().neumann_invert().unwrap();
        if !(composed.eq_mod_validity(&inverted).unwrap() && composed.valid_below() == inverted.valid_below()) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("50 random h, mismatches = {failures}"))
}

fn c4_spiral_averaging() -> Outcome {
    let g = ExponentGroup::RationalPlusGenerator(GeneratorEnclosure::pi(20));
    let f = Series::new(
        g.clone(),
        vec![
            (Exponent::zero(), Complex64::new(1.0, 0.0)),
            (Exponent::ratio(1, 2), Complex64::new(2.0, 0.0)),
            (Exponent::with_generator(Q::from_integer(0), Q::from_integer(1)), Complex64::new(3.0, 0.0)),
        ],
        None,
    )
    .unwrap();
    let eval = |p: LogPoint| series_value(&f, &p).unwrap();
    let alphas = [
        (Exponent::zero(), 1.0),
        (Exponent::ratio(1, 2), 2.0),
        (Exponent::with_generator(Q::from_integer(0), Q::from_integer(1)), 3.0),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (alpha, target) in alphas {
        let at = |turns| {
            let c = extract_coefficient(eval, &g, &alpha, 0.5, turns, hahn::eval::DEFAULT_NODES_PER_TURN).unwrap();
            (c - Complex64::new(target, 0.0)).norm()
        };
        let (e256, e512) = (at(256), at(512));
        let rel256 = e256 / target;
        let ratio_ok = e256 < 1e-12 || e512 / e256 <= 0.75;
        pass &= rel256 < 5e-3 && ratio_ok;
        parts.push(format!("a={alpha}: err {e256:.2e} (rel {rel256:.2e}), ratio {:.3}", e512 / e256.max(1e-300)));
    }
    outcome(pass, parts.join("; "))
}

fn c5_half_integer() -> Outcome {
    let k = resolvent_kernel_series(&Order::ratio(1, 2).unwrap(), 1.0, 2.0, 25).unwrap();
    let mut worst = 0.0f64;
    for (r, phi) in [(0.05, 0.0), (0.1, PI / 6.0), (0.1, 2.0 * PI)] {
        let p = LogPoint::new(r, phi).unwrap();
        let l = p.to_complex();
        let closed = l.sin() * (Complex64::i() * l * 2.0).exp() / l;
        worst = worst.max(rel(series_value(&k.series, &p).unwrap(), closed));
    }
    outcome(worst <= 1e-10, format!("worst relative error {worst:.2e}"))
}

fn c6_integer_log_branch() -> Outcome {
    let nu = Order::int(1);
    let k = resolvent_kernel_series(&nu, 1.0, 2.0, 25).unwrap();
    let logs = k.series.terms().iter().filter(|(e, _)| e.log == -1).count();
    let p = LogPoint::new(0.05, PI / 6.0).unwrap();
    let e = rel(series_value(&k.series, &p).unwrap(), resolvent_kernel_direct(&nu, &p, 1.0, 2.0).unwrap());
    outcome(e <= 1e-8 && logs > 0, format!("{logs} log terms, relative error {e:.2e}"))
}

fn c7_bound_sweep() -> Outcome {
    let cfg = BoundConfig { c: 1.0, r0: 0.5, form: BoundForm::Displayed };
    let orders = [
        Order::ratio(1, 2).unwrap(),
        Order::ratio(5, 2).unwrap(),
        Order::enclosure(GeneratorEnclosure::pi(15)).unwrap(),
        Order::int(1),
        Order::int(2),
    ];
    let mut total = 0;
    let mut failures = 0;
    let mut worst = 0.0f64;
    for nu in &orders {
        for c in coeff_bound_sweep(nu, 1.0, 2.0, 20, &[0.5, 1.0, 2.0], &cfg).unwrap() {
            total += 1;
            worst = worst.max(c.lhs / c.rhs);
            if !c.pass {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{total} inequalities, failures = {failures}, worst lhs/rhs = {worst:.3}"))
}

fn random_entry(rng: &mut ChaCha8Rng, g: &ExponentGroup, v: Exponent) -> Series<BigRational> {
    let shapes = [(1, 2, 0), (1, 1, -1), (1, 1, 0), (3, 2, 0), (1, 2, -1)];
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let (a, b, l) = shapes[rng.gen_range(0..shapes.len())];
        let e = Exponent::pair(Exponent::ratio(a, b), l);
        if !terms.iter().any(|(f, _)| *f == e) {
            terms.push((e, small_rational(rng)));
        }
    }
    Series::new(g.clone(), terms, Some(v)).unwrap()
}

fn matrices_eq(a: &MatrixSeries<BigRational>, b: &MatrixSeries<BigRational>) -> bool {
    (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.entry(i, j).eq_mod_validity(b.entry(i, j)).unwrap()))
}

fn c8_fredholm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = sqrt_log_group();
    let v = Exponent::int_pair(8, 0);
    let points: Vec<LogPoint> = [(0.02, 0.0), (0.01, 1.0), (0.03, -2.0), (0.015, 2.0 * PI + 0.5), (0.025, 4.0)]
        .iter()
        .map(|(r, p)| LogPoint::new(*r, *p).unwrap())
        .collect();
    let mut cramer_failures = 0;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let dim = 2 + i % 2;
        let entries = (0..dim).map(|_| (0..dim).map(|_| random_entry(&mut rng, &g, v)).collect()).collect();
        let f = MatrixSeries::new(entries).unwrap();
        let a = MatrixSeries::identity(&g, dim, Some(v)).unwrap().sub(&f).unwrap();
        let det = a.det().unwrap();
        let adj = a.adjugate().unwrap();
        let d_id = MatrixSeries::identity(&g, dim, Some(v)).unwrap().scale(&det).unwrap();
        if !(matrices_eq(&a.mul(&adj).unwrap(), &d_id) && matrices_eq(&adj.mul(&a).unwrap(), &d_id)) {
            cramer_failures += 1;
        }
        match resolve_identity_minus(&f).unwrap() {
            Resolution::Invertible(m) => {
                worst = worst.max(verify_inverse(&f, &m, &points).unwrap());
                worst = worst.max(compare_with_direct_inverse(&f, &m, &points).unwrap());
            }
            Resolution::NowhereInvertible { .. } => cramer_failures += 1,
        }
    }
    let id = MatrixSeries::<BigRational>::identity(&g, 2, Some(v)).unwrap();
    let nowhere = matches!(resolve_identity_minus(&id).unwrap(), Resolution::NowhereInvertible { .. });
    outcome(
        cramer_failures == 0 && worst <= 1e-10 && nowhere,
        format!("Cramer failures = {cramer_failures}, worst residual = {worst:.2e}, F = Id nowhere invertible: {nowhere}"),
    )
}

fn c9_suitability() -> Outcome {
    let r = kappa_suitable(&OrderFamily::SqrtIntegers { q_max: 1_000_000 }, 1.0, 1.0).unwrap();
    let g = r.gap.as_ref().unwrap();
    outcome(
        r.pass && g.gap_violations == 0 && g.bound_violations == 0 && g.checked == 1_000_001 - 1001,
        format!(
            "sup = {:.4}, gap checked for {} non-squares, violations {}/{}, max 1/((nu+1)|sin|) = {:.4}, max 1/(nu|sin|) = {:.4}",
            r.sup_observed, g.checked, g.gap_violations, g.bound_violations, g.max_first, g.max_second
        ),
    )
}

fn c10_support() -> Outcome {
    let sphere = cone_kernel_modes(&OrderFamily::SphereSpectrum { n: 2, k_max: 8 }, 1.0, 2.0, 10).unwrap();
    let circle = cone_kernel_modes(&OrderFamily::SphereSpectrum { n: 1, k_max: 8 }, 1.0, 2.0, 10).unwrap();
    let pole = vec![Exponent::int_pair(0, -1)];
    let ok = sphere.support.holomorphic && sphere.support.consistent && circle.support.negative == pole && !circle.support.holomorphic;
    outcome(
        ok,
        format!(
            "sphere n=2: {} modes, holomorphic {}; circle: negative exponents {:?}",
            sphere.modes.len(),
            sphere.support.holomorphic,
            circle.support.negative.iter().map(|e| e.to_string()).collect::<Vec<_>>()
        ),
    )
}

fn c11_weighted_norms() -> Outcome {
    let (kappa, c) = (3.0, 1.0);
    let mut failures = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    let mut tail: f64 = 0.0;
    for weight in [Weight::Exponential, Weight::Gaussian] {
        let cfg = HsConfig::standard(kappa, c, weight);
        for nu in [Order::ratio(1, 2).unwrap(), Order::int(2)] {
            for k in [0, 5, 10] {
                for j in [1, 2] {
                    let r = hs_bound_check(&nu, j, k, &cfg).unwrap();
                    total += 1;
                    worst = worst.max(r.lhs / r.rhs);
                    tail = tail.max(r.tail);
                    if !r.pass {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("{total} checks on [c, c+60]^2, failures = {failures}, worst lhs/rhs = {worst:.3}, largest squared tail bound = {tail:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("neumann inverse of 1 + z log z", c1_neumann_zlogz, 1),
        ("ring and round-trip suite", c2_ring_roundtrip, 10),
        ("composition vs Neumann", c3_compose_vs_neumann, 5),
        ("spiral averaging", c4_spiral_averaging, 5),
        ("half-integer closed form", c5_half_integer, 1),
        ("integer-order log branch", c6_integer_log_branch, 1),
        ("coefficient bound sweep", c7_bound_sweep, 5),
        ("Fredholm core", c8_fredholm, 10),
        ("kappa-suitability", c9_suitability, 30),
        ("cone support structure", c10_support, 5),
        ("weighted-norm bounds", c11_weighted_norms, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.3}s of {}s)",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
