//! Nested-interval certificates checked by the independent verifier.

mod common;

use common::q;
use proptest::prelude::*;
use refspline_core::powermod::dist_to_int;
use refspline_core::{erdos_construct, erdos_params, erdos_verify, ErdosCertificate, Field, FieldElement};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constructed_certificates_verify(
        lam in 2i64..=5,
        targets in prop::collection::vec((0i64..12, 1i64..12), 1..3),
        depth in 1u32..5,
    ) {
        let f = Field::RATIONAL;
        let lambda = FieldElement::from_int(f, lam);
        let targets: Vec<_> = targets.into_iter().map(|(n, d)| q(n, d)).collect();
        let cert = erdos_construct(&lambda, &targets, depth).unwrap();
        let rep = erdos_verify(&cert, 50);
        prop_assert!(rep.certified, "{:?}", rep.structural_errors);
        prop_assert!(rep.first_violation.is_none() || rep.first_violation.unwrap() > cert.guaranteed_depth);
        // ||xi lambda^n - r|| >= c exactly for every certified n.
        let xi = cert.xi.as_rational().unwrap().clone();
        let mut x = xi.clone();
        for n in 0..=cert.guaranteed_depth {
            if n >= cert.first_n {
                for r in &targets {
                    prop_assert!(dist_to_int(&(&x - r)) >= cert.c);
                }
            }
            x *= q(lam, 1);
        }
        let back = ErdosCertificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back, cert);
    }

    #[test]
    fn constant_decreases_with_more_targets(lam in 2i64..=9, m in 1usize..5) {
        let lambda = FieldElement::from_int(Field::RATIONAL, lam);
        let a = erdos_params(&lambda, m).unwrap();
        let b = erdos_params(&lambda, m + 1).unwrap();
        prop_assert!(b.c < a.c);
        prop_assert!(b.g >= a.g);
    }
}

#[test]
fn irrational_dilation_certificate() {
    let f = Field::new(10, 2).unwrap();
    let cert = erdos_construct(&FieldElement::theta(f), &[q(0, 1), q(1, 2)], 3).unwrap();
    let rep = erdos_verify(&cert, 10);
    assert!(rep.certified, "{:?}", rep.structural_errors);
    assert!(cert.intervals.windows(2).all(|w| w[0].0 <= w[1].0 && w[1].1 <= w[0].1));
}
