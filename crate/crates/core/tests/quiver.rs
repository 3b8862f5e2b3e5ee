use proptest::prelude::*;
use tsys_core::quiver::{build_btilde, ClusterSeed, QuiverNode};
use tsys_core::{LatticeState, SeedSpec};

fn node(r: usize) -> impl Strategy<Value = QuiverNode> {
    (1..=r as i32, -3..=3i32, any::<bool>()).prop_map(|(alpha, j, b)| {
        if b {
            QuiverNode::Barred { alpha, j }
        } else {
            QuiverNode::Unbarred { alpha, j }
        }
    })
}

fn case() -> impl Strategy<Value = (usize, Vec<QuiverNode>)> {
    (1..=3usize).prop_flat_map(|r| (Just(r), prop::collection::vec(node(r), 1..6)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reversed_sequence_undoes_mutation((r, seq) in case(), coef in any::<bool>()) {
        let b = build_btilde(r, (-3, 3), coef).unwrap();
        let mut m = b.clone();
        for &n in &seq {
            m = m.mutate(n).unwrap();
            prop_assert!(m.is_skew());
        }
        for &n in seq.iter().rev() {
            m = m.mutate(n).unwrap();
        }
        prop_assert_eq!(m, b);
    }

    #[test]
    fn exchanged_variables_are_laurent_and_involutive((r, seq) in case()) {
        let st = LatticeState::symbolic(SeedSpec::fundamental(r, (-6, 6)).unwrap());
        let seed0 = ClusterSeed::fundamental(&st, (-3, 3), None).unwrap();
        let mut seed = seed0.clone();
        for &n in &seq {
            seed = seed.mutate(n).unwrap();
        }
        let last = *seq.last().unwrap();
        let back = seed.mutate(last).unwrap();
        let mut prev = seed0;
        for &n in &seq[..seq.len() - 1] {
            prev = prev.mutate(n).unwrap();
        }
        prop_assert_eq!(&back.vars[&last], &prev.vars[&last]);
        prop_assert_eq!(back.matrix, prev.matrix);
    }
}
