//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use refspline_core::{Field, FieldElement};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_field(rng: &mut impl Rng) -> Field {
    loop {
        let n = rng.gen_range(2..=12u64);
        let k = rng.gen_range(1..=3u32);
        if let Ok(f) = Field::new(n, k) {
            return f;
        }
    }
}

pub fn small_rational(rng: &mut impl Rng) -> BigRational {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn random_element(rng: &mut impl Rng, f: Field) -> FieldElement {
    let c = (0..f.degree()).map(|_| small_rational(rng)).collect();
    FieldElement::from_coeffs(f, c)
}

pub fn random_nonzero(rng: &mut impl Rng, f: Field) -> FieldElement {
    loop {
        let x = random_element(rng, f);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Dilations with and without integer powers, all greater than 1.
pub fn random_lambda(rng: &mut impl Rng, f: Field) -> FieldElement {
    let t = FieldElement::theta(f);
    let mut pool =
        vec![FieldElement::from_int(f, 2), FieldElement::from_int(f, 3), FieldElement::from_rational(f, q(3, 2))];
    if !f.is_rational() {
        pool.push(t.clone());
        pool.push(t.scale(&q(2, 1)));
        pool.push(&t + &FieldElement::one(f));
        if f.degree() == 3 {
            pool.push(&t * &t);
        }
    }
    pool.retain(|l| *l > FieldElement::one(f));
    pool.choose(rng).expect("nonempty").clone()
}

fn small_positive(rng: &mut impl Rng) -> BigRational {
    q(rng.gen_range(1..=5), rng.gen_range(1..=3))
}

/// Directions built from chains `(c, c lambda, ..., c lambda^{k-1})` or
/// multiplier cycles `(c, c p / lambda)` with `p (lambda^2 / p) = lambda^2`;
/// these are refinable whenever such a structure exists.
pub fn structured_columns(rng: &mut impl Rng, lambda: &FieldElement, k: Option<u32>) -> Option<Vec<FieldElement>> {
    let f = lambda.field();
    let k = k?;
    let mut cols = Vec::new();
    while cols.len() + k as usize <= 4 {
        let c = FieldElement::from_rational(f, small_positive(rng));
        if k == 2 && rng.gen_bool(0.5) {
            let n = lambda.pow(2).ok()?.as_integer()?.to_i64()?;
            let divisors: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
            let p = *divisors.choose(rng)?;
            cols.push(c.clone());
            cols.push(c.scale(&q(p, 1)).checked_div(lambda).ok()?);
        } else {
            let mut m = c;
            for _ in 0..k {
                cols.push(m.clone());
                m = &m * lambda;
            }
        }
        if rng.gen_bool(0.4) {
            break;
        }
    }
    if cols.is_empty() {
        return None;
    }
    for c in cols.iter_mut() {
        if rng.gen_bool(0.2) {
            *c = c.neg();
        }
    }
    cols.shuffle(rng);
    Some(cols)
}

pub fn random_columns(rng: &mut impl Rng, f: Field) -> Vec<FieldElement> {
    let n = rng.gen_range(1..=4);
    (0..n).map(|_| random_nonzero(rng, f)).collect()
}

/// A mixed instance: structured (usually refinable) or unstructured (usually not).
pub fn random_instance(rng: &mut impl Rng) -> (FieldElement, Vec<FieldElement>) {
    let f = random_field(rng);
    let lambda = random_lambda(rng, f);
    let k = refspline_core::refinery::minimal_integer_power(&lambda);
    if rng.gen_bool(0.5) {
        if let Some(c) = structured_columns(rng, &lambda, k) {
            return (lambda, c);
        }
    }
    (lambda.clone(), random_columns(rng, f))
}
