use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use tsys_core::{Error, LaurentPoly, Monomial, SeedVar};

fn var() -> impl Strategy<Value = SeedVar> {
    (1..=2i32, -1..=1i32, 0..=1i32).prop_map(|(a, j, l)| SeedVar::new(a, j, l))
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((var(), -2..=2i32), 0..3).prop_map(Monomial::from_pairs)
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial(), -5..=5i64), 0..4)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn point() -> impl Strategy<Value = HashMap<SeedVar, BigRational>> {
    prop::collection::vec((1..=7i64, 1..=7i64, any::<bool>()), 12).prop_map(|vals| {
        let mut vars = Vec::new();
        for a in 1..=2 {
            for j in -1..=1 {
                for l in 0..=1 {
                    vars.push(SeedVar::new(a, j, l));
                }
            }
        }
        vars.into_iter()
            .zip(vals)
            .map(|(v, (p, q, s))| (v, BigRational::new(BigInt::from(if s { p } else { -p }), BigInt::from(q))))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), s in poly()) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.add(&q).add(&s), p.add(&q.add(&s)));
        prop_assert_eq!(p.mul(&q).mul(&s), p.mul(&q.mul(&s)));
        prop_assert_eq!(p.mul(&q.add(&s)), p.mul(&q).add(&p.mul(&s)));
        prop_assert!(p.sub(&p).is_zero());
        prop_assert_eq!(p.mul(&LaurentPoly::one()), p.clone());
    }

    #[test]
    fn division_undoes_multiplication(p in poly(), q in nonzero_poly()) {
        prop_assert_eq!(p.mul(&q).exact_div(&q).unwrap(), p);
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(), q in poly(), x in point()) {
        let e = |f: &LaurentPoly| f.eval_map(&x).unwrap();
        prop_assert_eq!(e(&p.mul(&q)), e(&p) * e(&q));
        prop_assert_eq!(e(&p.add(&q)), e(&p) + e(&q));
    }

    #[test]
    fn identity_substitution(p in poly()) {
        prop_assert_eq!(p.substitute(&|v: &SeedVar| LaurentPoly::var(*v)).unwrap(), p);
    }

    #[test]
    fn positive_products_stay_positive(ms in prop::collection::vec((monomial(), 1..=4i64), 1..4), n in monomial()) {
        let p = LaurentPoly::from_terms(ms.into_iter().map(|(m, c)| (m, BigInt::from(c))));
        prop_assert!(p.is_positive());
        prop_assert!(p.mul(&p).mul_term(&n, &BigInt::from(2)).is_positive());
        prop_assert!(!p.neg().is_positive());
    }
}

#[test]
fn non_divisible_is_an_error() {
    let x = LaurentPoly::var(SeedVar::new(1, 0, 0));
    let y = LaurentPoly::var(SeedVar::new(1, 1, 0));
    let p = x.add(&LaurentPoly::one());
    assert!(matches!(p.exact_div(&x.add(&y)), Err(Error::NotDivisible)));
    assert!(matches!(p.exact_div(&LaurentPoly::zero()), Err(Error::DivisionByZero)));
    assert_eq!(p.mul(&x.pow(3)).exact_div(&x.pow(3)).unwrap(), p);
}
