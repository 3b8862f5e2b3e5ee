use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use tsys_core::{Error, LatticeState, LaurentPoly, MotzkinPath, SeedSpec, SeedVar};

fn spec(r: usize) -> SeedSpec {
    SeedSpec::fundamental(r, (-12, 12)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn numeric_evolution_satisfies_the_recurrence(r in 1..=3usize, seed in any::<u64>(), a in 1..=3i32, j in -3..=3i32, k in -3..=4i32) {
        prop_assume!(a as usize <= r);
        let st = LatticeState::random(spec(r), seed);
        prop_assert!(st.exchange_residual(a, j, k).unwrap().is_zero());
    }

    #[test]
    fn symbolic_values_evaluate_to_numeric_ones(r in 1..=2usize, seed in any::<u64>(), a in 1..=2i32, j in -2..=2i32, k in -2..=4i32) {
        prop_assume!(a as usize <= r);
        let num = LatticeState::random(spec(r), seed);
        let sym = LatticeState::symbolic(spec(r));
        let point: HashMap<SeedVar, BigRational> = num.seed_entries().map(|(v, x)| (v, x.clone())).collect();
        prop_assert_eq!(sym.evolve(a, j, k).unwrap().eval_map(&point).unwrap(), num.evolve(a, j, k).unwrap());
    }

    #[test]
    fn symbolic_values_are_positive(r in 1..=3usize, a in 1..=3i32, j in -2..=2i32, k in -3..=4i32) {
        prop_assume!(a as usize <= r);
        prop_assert!(LatticeState::symbolic(spec(r)).evolve(a, j, k).unwrap().is_positive());
    }

    #[test]
    fn reflection_in_j(r in 1..=3usize, seed in any::<u64>(), a in 1..=3i32, j in -3..=3i32, k in 0..=4i32) {
        prop_assume!(a as usize <= r);
        let st = LatticeState::random(spec(r), seed);
        prop_assert_eq!(st.reflected_j().evolve(a, -j, k).unwrap(), st.evolve(a, j, k).unwrap());
        prop_assert_eq!(st.swapped_levels().evolve(a, j, 1 - k).unwrap(), st.evolve(a, j, k).unwrap());
    }
}

#[test]
fn staircase_seed_reexpresses_fundamental_values() {
    let sym = LatticeState::symbolic(spec(2));
    let m = MotzkinPath::new(vec![1, 0]).unwrap();
    let induced = sym.induced(&m, (-8, 8)).unwrap();
    for (j, k) in [(0, 2), (1, 3), (-1, 4)] {
        assert_eq!(induced.evolve(1, j, k).unwrap(), sym.evolve(1, j, k).unwrap());
        assert_eq!(induced.evolve(2, j, k).unwrap(), sym.evolve(2, j, k).unwrap());
    }
}

#[test]
fn window_errors() {
    let st = LatticeState::symbolic(SeedSpec::fundamental(1, (-2, 2)).unwrap());
    assert!(matches!(st.evolve(1, 0, 6), Err(Error::WindowExceeded { .. })));
    assert!(matches!(st.evolve(3, 0, 0), Err(Error::InvalidIndex(_))));
    assert_eq!(st.evolve(2, 0, 9).unwrap(), LaurentPoly::one());
    assert!(SeedSpec::fundamental(1, (3, 2)).is_err());
    assert!(MotzkinPath::new(vec![0, 2]).is_err());
}
