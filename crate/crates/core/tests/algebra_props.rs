//! Invariants of field arithmetic and quasi-trigonometric polynomials.

mod common;

use common::q;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use refspline_core::{Field, FieldElement, QTrigPoly, RBall};

fn field() -> impl Strategy<Value = Field> {
    (2u64..=12, 1u32..=3).prop_filter_map("perfect powers are rejected", |(n, k)| Field::new(n, k).ok())
}

fn element(f: Field) -> impl Strategy<Value = FieldElement> {
    prop::collection::vec((-30i64..=30, 1i64..=7), f.degree() as usize)
        .prop_map(move |c| FieldElement::from_coeffs(f, c.into_iter().map(|(n, d)| q(n, d)).collect()))
}

fn nonzero(f: Field) -> impl Strategy<Value = FieldElement> {
    element(f).prop_filter("nonzero", |x| !x.is_zero())
}

fn poly(f: Field) -> impl Strategy<Value = QTrigPoly> {
    prop::collection::vec((element(f), -9i64..=9, 1i64..=4), 0..6).prop_map(move |terms| {
        let mut p = QTrigPoly::zero(f);
        for (d, n, den) in terms {
            p.add_term(d, q(n, den));
        }
        p
    })
}

proptest! {
    #[test]
    fn mul_div_round_trip((a, b) in field().prop_flat_map(|f| (element(f), nonzero(f)))) {
        let prod = &a * &b;
        prop_assert_eq!(prod.checked_div(&b).unwrap(), a.clone());
        prop_assert_eq!(&b * &b.inv().unwrap(), FieldElement::one(b.field()));
    }

    #[test]
    fn int_ratio_recovers_multiplier((m, p) in field().prop_flat_map(|f| (nonzero(f), -1000i64..=1000))) {
        let x = m.scale(&BigRational::from_integer(BigInt::from(p)));
        prop_assert_eq!(x.int_ratio(&m).unwrap(), Some(BigInt::from(p)));
    }

    #[test]
    fn floor_brackets_value(x in field().prop_flat_map(element)) {
        let fl = FieldElement::from_bigint(x.field(), x.floor());
        prop_assert!(fl <= x);
        prop_assert!(x < &fl + &FieldElement::one(x.field()));
        let fr = x.fract();
        prop_assert!(!fr.is_negative() && fr < FieldElement::one(x.field()));
    }

    #[test]
    fn sign_agrees_with_double(x in field().prop_flat_map(element)) {
        let v = x.to_f64();
        if v.abs() > 1e-9 {
            prop_assert_eq!(x.is_positive(), v > 0.0);
        }
        prop_assert_eq!(x.is_zero(), x.sign() == std::cmp::Ordering::Equal);
    }

    #[test]
    fn text_round_trip(x in field().prop_flat_map(element)) {
        prop_assert_eq!(FieldElement::parse(&x.to_text(), x.field()).unwrap(), x.clone());
        prop_assert_eq!(FieldElement::parse_standalone(&x.to_text()).unwrap(), x);
    }

    #[test]
    fn binomial_division_identity((p, m) in field().prop_flat_map(|f| (poly(f), nonzero(f)))) {
        let prod = p.mul(&QTrigPoly::binomial(&m));
        prop_assert_eq!(prod.divide_binomial(&m), Some(p));
    }

    #[test]
    fn geometric_identity((m, n) in field().prop_flat_map(|f| (nonzero(f), 1u64..=100))) {
        let lhs = QTrigPoly::geometric(n, &m).mul(&QTrigPoly::binomial(&m));
        let rhs = QTrigPoly::binomial(&m.scale(&q(n as i64, 1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn standard_decomposition_reassembles(p in field().prop_flat_map(poly)) {
        let dec = p.standard_decomposition();
        prop_assert_eq!(dec.reassemble(), p.clone());
        // classes have distinct representatives modulo the integers
        for (i, a) in dec.classes.iter().enumerate() {
            for b in &dec.classes[i + 1..] {
                prop_assert!(!(&a.representative - &b.representative).is_integer());
            }
        }
    }

    #[test]
    fn evaluation_enclosures_overlap((p, n, d) in field().prop_flat_map(|f| (poly(f), -50i64..=50, 1i64..=9))) {
        let f = p.field();
        let w = FieldElement::from_rational(f, q(n, d));
        let lo = p.eval_exact(&w, 64);
        let hi = p.eval_exact(&w, 200);
        let ball = p.eval(&RBall::from_rational(&q(n, d), 200), 64);
        let approx = p.eval_f64(n as f64 / d as f64);
        for (a, b) in [(&lo, &hi), (&ball, &hi)] {
            prop_assert!((a.re.mid_f64() - b.re.mid_f64()).abs() <= a.re.width_f64() + b.re.width_f64() + 1e-300);
            prop_assert!((a.im.mid_f64() - b.im.mid_f64()).abs() <= a.im.width_f64() + b.im.width_f64() + 1e-300);
        }
        prop_assert!((hi.mid_f64() - approx).norm() < 1e-9);
    }
}

#[test]
fn capelli_rejections() {
    assert!(Field::new(4, 2).is_err());
    assert!(Field::new(8, 3).is_err());
    assert!(Field::new(9, 2).is_err());
    assert!(Field::new(10, 2).is_ok());
    assert!(Field::new(12, 3).is_ok());
}
