//! The sublattice of `R^n` generated by finitely many vectors is fixed by its
//! ray classes: coordinates whose generator patterns are positive multiples
//! of each other move together, and coordinates where every generator
//! vanishes stay zero. Each class gives one atom.

use arens_core::lattice::{Riesz, Space, VecElem};
use arens_core::operator::{finite_rank_reduce, RegOperator, TensorOp};
use arens_core::rational::{rat, zero};
use arens_core::Rational;
use proptest::prelude::*;

/// Ray classes of the coordinates for generators `gens`.
fn ray_classes(gens: &[VecElem], n: usize) -> Vec<Vec<usize>> {
    let pattern = |j: usize| -> Vec<Rational> { gens.iter().map(|g| g.get(j)).collect() };
    let same_ray = |p: &[Rational], q: &[Rational]| {
        let s = p.iter().position(|v| *v != zero()).expect("nonzero pattern");
        if q[s] == zero() {
            return false;
        }
        let c = &q[s] / &p[s];
        c > zero() && p.iter().zip(q).all(|(a, b)| a * &c == *b)
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for j in 1..=n {
        let p = pattern(j);
        if p.iter().all(|v| *v == zero()) {
            continue;
        }
        match classes.iter_mut().find(|c| same_ray(&pattern(c[0]), &p)) {
            Some(c) => c.push(j),
            None => classes.push(vec![j]),
        }
    }
    classes
}

/// `A(e_i) = gens[i]`, so the range is spanned by `gens`.
fn linear_op(gens: &[VecElem], n: usize) -> RegOperator {
    let entries: Vec<(Vec<usize>, usize, Rational)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| (1..=n).map(move |j| (vec![i + 1], j, g.get(j))))
        .filter(|(_, _, v)| *v != zero())
        .collect();
    RegOperator::new(TensorOp::from_entries(vec![gens.len()], Space::FinDim(n), entries).unwrap())
}

#[derive(Debug, Clone)]
enum Word {
    Gen(usize),
    Sup(Box<Word>, Box<Word>),
    Inf(Box<Word>, Box<Word>),
    Comb(i64, Box<Word>, i64, Box<Word>),
    Abs(Box<Word>),
}

fn word(k: usize) -> impl Strategy<Value = Word> {
    let leaf = (0..k).prop_map(Word::Gen);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Word::Sup(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Word::Inf(Box::new(a), Box::new(b))),
            (-3i64..=3, inner.clone(), -3i64..=3, inner.clone())
                .prop_map(|(s, a, t, b)| Word::Comb(s, Box::new(a), t, Box::new(b))),
            inner.prop_map(|a| Word::Abs(Box::new(a))),
        ]
    })
}

fn eval(w: &Word, gens: &[VecElem]) -> VecElem {
    match w {
        Word::Gen(i) => gens[*i].clone(),
        Word::Sup(a, b) => eval(a, gens).sup(&eval(b, gens)),
        Word::Inf(a, b) => eval(a, gens).inf(&eval(b, gens)),
        Word::Comb(s, a, t, b) => eval(a, gens).scale(&rat(*s, 1)).add(&eval(b, gens).scale(&rat(*t, 1))),
        Word::Abs(a) => eval(a, gens).abs(),
    }
}

fn generators() -> impl Strategy<Value = (usize, Vec<VecElem>)> {
    (1usize..=5, 1usize..=3).prop_flat_map(|(n, k)| {
        let coord = prop_oneof![2 => Just(0i64), 3 => -3i64..=3];
        (Just(n), prop::collection::vec(prop::collection::vec(coord, n).prop_map(|v| VecElem::from_ints(&v)), k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn atoms_match_ray_classes((n, gens) in generators()) {
        let r = finite_rank_reduce(&linear_op(&gens, n)).unwrap();
        let classes = ray_classes(&gens, n);
        prop_assert_eq!(r.dim(), classes.len());
        for atom in &r.atoms {
            prop_assert!(atom.is_positive());
            let support = atom.support();
            let class = classes.iter().find(|c| c.contains(&support[0])).expect("atom inside a class");
            prop_assert_eq!(&support, class);
        }
        for g in &gens {
            prop_assert!(r.contains(g));
            let back = r.from_coords(&r.to_coords(g).unwrap());
            if r.dim() > 0 {
                prop_assert_eq!(back.unwrap(), g.clone());
            }
        }
    }

    #[test]
    fn lattice_words_stay_inside((n, gens) in generators(), w in word(3)) {
        let gens: Vec<VecElem> = (0..3).map(|i| gens[i % gens.len()].clone()).collect();
        let r = finite_rank_reduce(&linear_op(&gens, n)).unwrap();
        let x = eval(&w, &gens);
        prop_assert!(r.contains(&x), "{:?} -> {:?}", w, x);
        if r.dim() > 0 {
            let (a, b) = (eval(&w, &gens), gens[0].clone());
            let lhs = r.to_coords(&a.sup(&b)).unwrap();
            prop_assert_eq!(lhs, r.to_coords(&a).unwrap().sup(&r.to_coords(&b).unwrap()));
        }
    }
}

#[test]
fn split_class_rejects_a_unit() {
    let gens = vec![VecElem::from_ints(&[1, 2, 0]), VecElem::from_ints(&[2, 4, 0])];
    let r = finite_rank_reduce(&linear_op(&gens, 3)).unwrap();
    assert_eq!(r.dim(), 1);
    assert!(!r.contains(&VecElem::unit(3, 1)));
}
