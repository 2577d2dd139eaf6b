use arens_core::lattice::{is_riesz_hom, HomVerdict, Primal, Riesz, Space};
use arens_core::linalg::Matrix;
use arens_core::rational::rat;
use arens_core::sample;
use proptest::prelude::*;

const ORACLE_VECTORS: usize = 1000;

/// `|T x| = T|x|` on seeded random vectors; `false` on the first violation.
fn oracle(t: &Matrix, seed: u64) -> bool {
    let space = Space::FinDim(t.cols);
    let mut rng = sample::rng(seed);
    (0..ORACLE_VECTORS).all(|_| {
        let Primal::Vec(x) = sample::primal(&space, &mut rng) else { unreachable!() };
        t.apply(&x).unwrap().abs() == t.apply(&x.abs()).unwrap()
    })
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => -3i64..=3], c), r).prop_map(|rows| {
            Matrix::from_rows(rows.into_iter().map(|row| row.into_iter().map(|v| rat(v, 1)).collect()).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn verdict_matches_random_vector_oracle(t in matrix(), seed in any::<u64>()) {
        let verdict = is_riesz_hom(&t).unwrap();
        prop_assert_eq!(verdict.is_yes(), oracle(&t, seed), "{:?}", t);
        if let HomVerdict::No { witness } = verdict {
            prop_assert_ne!(t.apply(&witness).unwrap().abs(), t.apply(&witness.abs()).unwrap());
        }
    }
}

#[test]
fn weighted_selections_are_homs() {
    let t = Matrix::from_int_rows(&[&[0, 2, 0], &[0, 0, 0], &[5, 0, 0], &[0, 1, 0]]);
    assert!(is_riesz_hom(&t).unwrap().is_yes());
    assert!(oracle(&t, 9));
}
