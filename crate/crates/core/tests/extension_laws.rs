use arens_core::arens::{arens_extend, davie_gamelin_eval, multimorphism_at, star_chain, Extension, DEFAULT_CAP};
use arens_core::bidual::{embed_j, Bidual};
use arens_core::lattice::{EvConstSeq, Primal, Riesz, Space, VecElem};
use arens_core::operator::{
    kusraev_factor, tensor_of_factors, CoordProduct, Permutation, RegOperator, TensorOp, UpperTriangular,
    WeightedDiagonal,
};
use arens_core::rational::{int, rat};
use arens_core::sample;
use arens_core::Rational;
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d))
}

fn tensor() -> impl Strategy<Value = TensorOp> {
    (prop::collection::vec(1usize..=3, 1..=3), 1usize..=2).prop_flat_map(|(dims, c)| {
        let cells: usize = dims.iter().product::<usize>() * c;
        prop::collection::vec(prop_oneof![2 => Just(None), 3 => q().prop_map(Some)], cells).prop_map(move |vals| {
            let mut t = TensorOp::zeros(dims.clone(), Space::FinDim(c)).unwrap();
            let idx = arens_core::operator::index_tuples(&dims);
            let mut it = vals.into_iter();
            for i in &idx {
                for j in 1..=c {
                    if let Some(v) = it.next().flatten() {
                        t.set(i, j, v);
                    }
                }
            }
            t
        })
    })
}

fn weights() -> impl Strategy<Value = EvConstSeq> {
    (prop::collection::vec(q(), 0..4), q()).prop_map(|(p, t)| EvConstSeq::new(p, t))
}

fn random_args(a: &RegOperator, seed: u64) -> Vec<Bidual> {
    let mut rng = sample::rng(seed);
    a.domain().iter().map(|s| sample::bidual(s, &mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extensions_extend_the_operator(t in tensor(), seed in any::<u64>()) {
        let a = RegOperator::new(t);
        let mut rng = sample::rng(seed);
        let xs: Vec<Primal> = a.domain().iter().map(|s| sample::primal(s, &mut rng)).collect();
        let js: Vec<Bidual> = xs.iter().map(embed_j).collect();
        let want = embed_j(&a.evaluate(&xs).unwrap());
        for rho in Permutation::all(a.arity()) {
            prop_assert_eq!(arens_extend(&a, &rho).unwrap().eval(&js).unwrap(), want.clone());
        }
        prop_assert_eq!(star_chain(&a).eval(&js).unwrap(), want);
    }

    #[test]
    fn weighted_diagonal_oracles_agree(w in weights(), seed in any::<u64>()) {
        let a = RegOperator::new(WeightedDiagonal::new(2, w).unwrap());
        let args = random_args(&a, seed);
        for rho in Permutation::all(2) {
            let bar = arens_extend(&a, &rho).unwrap().eval(&args).unwrap();
            let dg = davie_gamelin_eval(&a, &rho, &args, DEFAULT_CAP).unwrap();
            prop_assert_eq!(bar, dg.value);
        }
        let th = arens_extend(&a, &Permutation::theta(2)).unwrap();
        prop_assert_eq!(star_chain(&a).eval(&args).unwrap(), th.eval(&args).unwrap());
    }

    #[test]
    fn extensions_are_multilinear(w in weights(), seed in any::<u64>(), c in q()) {
        let a = RegOperator::new(WeightedDiagonal::new(2, w).unwrap());
        let x = random_args(&a, seed);
        let x2 = random_args(&a, seed ^ 0xabc);
        for rho in Permutation::all(2) {
            let e = arens_extend(&a, &rho).unwrap();
            let mixed = vec![x[0].scale(&c).add(&x2[0]), x[1].clone()];
            let lhs = e.eval(&mixed).unwrap();
            let rhs = e.eval(&x).unwrap().scale(&c).add(&e.eval(&[x2[0].clone(), x[1].clone()]).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn coordinate_products_have_one_multimorphic_extension(seed in any::<u64>(), c_model in any::<bool>()) {
        let space = if c_model { Space::SeqC } else { Space::SeqL1 };
        let a = RegOperator::new(CoordProduct::new(space, 2).unwrap());
        let args = random_args(&a, seed);
        let exts: Vec<_> = Permutation::all(2).iter().map(|r| arens_extend(&a, r).unwrap()).collect();
        prop_assert_eq!(exts[0].eval(&args).unwrap(), exts[1].eval(&args).unwrap());
        for e in &exts {
            prop_assert!(multimorphism_at(e, &args).unwrap().is_none());
        }
    }

    #[test]
    fn positive_functional_products_factor(
        dims in prop::collection::vec(1usize..=3, 1..=3),
        picks in prop::collection::vec((0usize..3, 1i64..=3), 3),
    ) {
        let idx: Vec<usize> = dims.iter().zip(&picks).map(|(d, (p, _))| p % d + 1).collect();
        let scale: i64 = picks.iter().take(dims.len()).map(|(_, s)| s).product();
        let mut t = TensorOp::zeros(dims.clone(), Space::FinDim(1)).unwrap();
        t.set(&idx, 1, int(scale));
        let a = RegOperator::new(t.clone());
        let factors = kusraev_factor(&a).unwrap();
        prop_assert_eq!(factors.len(), dims.len());
        prop_assert_eq!(tensor_of_factors(&factors).unwrap(), t);
    }
}

#[test]
fn upper_triangular_extensions_split_at_the_limit() {
    let b = RegOperator::new(UpperTriangular::new(Space::SeqL1).unwrap());
    let l = Bidual::limit_l1();
    let id = arens_extend(&b, &Permutation::identity(2)).unwrap().eval(&[l.clone(), l.clone()]).unwrap();
    let th = arens_extend(&b, &Permutation::theta(2)).unwrap().eval(&[l.clone(), l]).unwrap();
    assert_eq!(id, Bidual::Vec(VecElem::from_ints(&[0])));
    assert_eq!(th, Bidual::Vec(VecElem::from_ints(&[1])));
}
