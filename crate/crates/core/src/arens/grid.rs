//! Generator grids of bidual arguments and dual functionals.

use crate::bidual::{embed_j, Bidual, CBidualElem, CDualElem, L1BidualElem};
use crate::lattice::{Dual, EvConstSeq, FinSupSeq, Model, Primal, Space, VecElem};
use crate::operator::index_tuples;
use crate::rational::{int, one, rat, zero, Rational};

/// Highest unit index in the grid.
pub const GRID_EXTENT: usize = 6;

fn fin_mixed(n: usize) -> [VecElem; 2] {
    let a = (1..=n).map(|i| if i % 2 == 1 { int(i as i64) } else { -int(i as i64) }).collect();
    let b = (1..=n).map(|i| if i % 2 == 1 { rat(-1, 2) } else { int(3) }).collect();
    [VecElem::new(a), VecElem::new(b)]
}

/// Generators of one slot: `J` of unit vectors, pure singular elements, and
/// two mixed elements.
pub fn slot_generators(space: &Space) -> Vec<Bidual> {
    match space.model() {
        Model::Fin(n) => {
            let mut g: Vec<Bidual> = (1..=n).map(|i| Bidual::Vec(VecElem::unit(n, i))).collect();
            if n > 1 {
                g.extend(fin_mixed(n).into_iter().map(Bidual::Vec));
            } else {
                g.push(Bidual::Vec(VecElem::new(vec![rat(-3, 2)])));
            }
            g
        }
        Model::L1 => {
            let mut g = vec![Bidual::limit_l1()];
            g.extend((1..=GRID_EXTENT).map(|i| embed_j(&Primal::Finsup(FinSupSeq::unit(i)))));
            g.push(Bidual::L1Bidual(L1BidualElem::new(
                FinSupSeq::from_pairs([(2, int(1)), (5, int(-2))]),
                int(1),
            )));
            g.push(Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::from_pairs([(1, int(3))]), rat(-1, 2))));
            g
        }
        Model::C => {
            let mut g = vec![Bidual::CBidual(CBidualElem::new(one(), EvConstSeq::constant(zero())))];
            g.extend((1..=GRID_EXTENT).map(|i| embed_j(&Primal::Evconst(EvConstSeq::unit(i)))));
            g.push(embed_j(&Primal::Evconst(EvConstSeq::constant(one()))));
            g.push(Bidual::CBidual(CBidualElem::new(int(2), EvConstSeq::new(vec![int(1), int(-1)], int(1)))));
            g.push(Bidual::CBidual(CBidualElem::new(int(-1), EvConstSeq::new(vec![int(0), int(3)], int(-2)))));
            g
        }
    }
}

/// All tuples of slot generators.
pub fn generator_tuples(domain: &[Space]) -> Vec<Vec<Bidual>> {
    let gens: Vec<Vec<Bidual>> = domain.iter().map(slot_generators).collect();
    let dims: Vec<usize> = gens.iter().map(Vec::len).collect();
    index_tuples(&dims)
        .into_iter()
        .map(|idx| idx.iter().zip(&gens).map(|(&i, g)| g[i - 1].clone()).collect())
        .collect()
}

/// Dual generators of a space: coordinate functionals, plus the constant
/// one on the ℓ_1-model and the limit functional on the c-model.
pub fn dual_generators(space: &Space) -> Vec<Dual> {
    match space.model() {
        Model::Fin(n) => (1..=n).map(|i| Dual::Vec(VecElem::unit(n, i))).collect(),
        Model::L1 => {
            let mut g: Vec<Dual> = (1..=GRID_EXTENT).map(|i| Dual::coordinate(space, i)).collect();
            g.push(Dual::Evconst(EvConstSeq::constant(one())));
            g
        }
        Model::C => {
            let mut g = vec![Dual::CDual(CDualElem::limit())];
            g.extend((1..=GRID_EXTENT).map(|i| Dual::coordinate(space, i)));
            g
        }
    }
}

/// Riesz-homomorphism functionals among the dual generators.
pub fn hom_functionals(space: &Space) -> Vec<Dual> {
    match space.model() {
        Model::L1 => (1..=GRID_EXTENT).map(|i| Dual::coordinate(space, i)).collect(),
        _ => dual_generators(space),
    }
}

/// Elements with three sign-carrying components; every sign choice is one
/// template. The components are spread over the index range so that singular
/// and regular parts interact.
pub fn sign_templates(space: &Space) -> Vec<Bidual> {
    let s = |bits: u32, k: u32| if bits >> k & 1 == 1 { -one() } else { one() };
    let mags: [Rational; 3] = [int(1), int(2), rat(1, 2)];
    let mut out: Vec<Bidual> = Vec::new();
    for t in (0..8u32).map(|bits| match space.model() {
            Model::Fin(n) => {
                let mut v = vec![zero(); n];
                for (k, m) in mags.iter().enumerate().take(n) {
                    v[(k * 2) % n] += s(bits, k as u32) * m;
                }
                Bidual::Vec(VecElem::new(v))
            }
            Model::L1 => Bidual::L1Bidual(L1BidualElem::new(
                FinSupSeq::from_pairs([(1, s(bits, 0) * &mags[0]), (3, s(bits, 1) * &mags[1])]),
                s(bits, 2) * &mags[2],
            )),
            Model::C => Bidual::CBidual(CBidualElem::new(
                s(bits, 2) * &mags[2],
                EvConstSeq::new(vec![s(bits, 0) * &mags[0], zero(), zero()], s(bits, 1) * &mags[1]),
            )),
        }) {
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}
