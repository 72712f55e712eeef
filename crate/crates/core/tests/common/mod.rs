#![allow(dead_code)]

use hahn::exponent::Q;
use hahn::{Exponent, ExponentGroup, GeneratorEnclosure, LineGroup, Series};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pi_group() -> ExponentGroup {
    ExponentGroup::RationalPlusGenerator(GeneratorEnclosure::pi(20))
}

pub fn sqrt_log_group() -> ExponentGroup {
    ExponentGroup::LexPair { first: LineGroup::RationalLine, beta_denominator: 1 }
}

pub fn groups() -> Vec<(&'static str, ExponentGroup)> {
    vec![
        ("rational-line", ExponentGroup::RationalLine),
        ("rational+pi", pi_group()),
        ("lex-pair", sqrt_log_group()),
    ]
}

pub fn validity(g: &ExponentGroup) -> Exponent {
    if g.has_logs() {
        Exponent::int_pair(2, 0)
    } else {
        Exponent::int(2)
    }
}

/// A positive exponent of moderate size.
pub fn positive_exponent(rng: &mut ChaCha8Rng, g: &ExponentGroup) -> Exponent {
    match g {
        ExponentGroup::RationalLine => {
            let d = rng.gen_range(1..=3);
            Exponent::ratio(rng.gen_range(1..=2 * d), d)
        }
        ExponentGroup::RationalPlusGenerator(_) => loop {
            let re = Q::new(rng.gen_range(0..=2), 2);
            let gen = Q::from_integer(rng.gen_range(0..=1));
            if re != Q::from_integer(0) || gen != Q::from_integer(0) {
                break Exponent::with_generator(re, gen);
            }
        },
        ExponentGroup::LexPair { .. } => {
            Exponent::pair(Exponent::ratio(rng.gen_range(1..=3), 2), rng.gen_range(-1..=0))
        }
    }
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let n = rng.gen_range(-3..=3);
        if n != 0 {
            return q(n, rng.gen_range(1..=4));
        }
    }
}

pub fn small_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_terms<C>(
    rng: &mut ChaCha8Rng,
    g: &ExponentGroup,
    unit: bool,
    coeff: &mut dyn FnMut(&mut ChaCha8Rng) -> C,
) -> Vec<(Exponent, C)> {
    let mut terms = Vec::new();
    if unit {
        terms.push((Exponent::zero(), coeff(rng)));
    }
    for _ in 0..rng.gen_range(1..=3) {
        let e = positive_exponent(rng, g);
        if !terms.iter().any(|(f, _)| *f == e) {
            terms.push((e, coeff(rng)));
        }
    }
    terms
}

pub fn random_rational(rng: &mut ChaCha8Rng, g: &ExponentGroup, unit: bool) -> Series<BigRational> {
    let terms = random_terms(rng, g, unit, &mut small_rational);
    Series::new(g.clone(), terms, Some(validity(g))).unwrap()
}

pub fn random_complex(rng: &mut ChaCha8Rng, g: &ExponentGroup, unit: bool) -> Series<Complex64> {
    let mut coeff = |r: &mut ChaCha8Rng| loop {
        let c = small_complex(r);
        if c.norm() > 0.25 {
            break c;
        }
    };
    let terms = random_terms(rng, g, unit, &mut coeff);
    Series::new(g.clone(), terms, Some(validity(g))).unwrap()
}

pub fn max_coeff_error(a: &Series<Complex64>, b: &Series<Complex64>) -> f64 {
    let d = a.sub(b).unwrap();
    d.terms().iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
}
