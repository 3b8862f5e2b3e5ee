use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsys_core::opseries::{lattice_fraction, random_series, Coef, DSeries};
use tsys_core::{LatticeState, SeedSpec};

const ORDER: i32 = 8;

fn series(seed: u64, val: i32) -> DSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_series(&mut rng, val, ORDER, -30, 30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>()) {
        let x = series(seed, 0);
        let y = x.inv().unwrap();
        let one = DSeries::one(ORDER);
        prop_assert_eq!(x.mul(&y).first_difference(&one, ORDER, -2..=2).unwrap(), None);
        prop_assert_eq!(y.mul(&x).first_difference(&one, ORDER, -2..=2).unwrap(), None);
        let z = y.inv().unwrap();
        prop_assert_eq!(z.first_difference(&x, ORDER, -2..=2).unwrap(), None);
    }

    #[test]
    fn left_inverse_is_unique(s1 in any::<u64>(), s2 in any::<u64>()) {
        // Y + (1 - Y X) W is Y again once Y X = 1.
        let x = series(s1, 0);
        let w = series(s2, 0);
        let y = x.inv().unwrap();
        let y2 = y.add(&DSeries::one(ORDER).sub(&y.mul(&x)).mul(&w));
        prop_assert_eq!(y2.first_difference(&y, ORDER, -2..=2).unwrap(), None);
    }

    #[test]
    fn normal_ordering(seed in any::<u64>(), t in -5..=5i64) {
        let x = series(seed, 0);
        let d = DSeries::d(ORDER + 1);
        let dx = d.mul(&x);
        let xd = x.mul(&d);
        prop_assert_eq!(d.mul(&x.conj()).first_difference(&xd, ORDER, t..=t).unwrap(), None);
        for n in 0..ORDER {
            prop_assert_eq!(dx.coeff(n + 1, t).unwrap(), x.coeff(n, t + 1).unwrap());
        }
    }
}

#[test]
fn diagonal_elements() {
    let w = Coef::new(|t| Ok(BigRational::from_integer((t * t + 1).into())));
    let x = DSeries::step(w, 4);
    assert_eq!(x.element(2, 3).unwrap(), BigRational::from_integer(5.into()));
    assert!(x.element(2, 2).unwrap() == BigRational::from_integer(0.into()));
    assert!(DSeries::one(3).element(7, 7).unwrap().is_one());
}

#[test]
fn fraction_entries_generate_t1_for_a2() {
    let st = LatticeState::random(SeedSpec::fundamental(2, (-30, 30)).unwrap(), 12);
    let f = lattice_fraction(&st, 10, -20, 20).unwrap();
    for j in [0, 1] {
        for k in 0..=4 {
            let lhs = f.element((j - k) as i64, (j + k) as i64).unwrap() * st.evolve(1, j + k, 0).unwrap();
            assert_eq!(lhs, st.evolve(1, j, k).unwrap());
        }
    }
}
