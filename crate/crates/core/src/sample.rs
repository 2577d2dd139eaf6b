//! Seeded random generation of lattice, dual and bidual elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bidual::{Bidual, CBidualElem, CDualElem, L1BidualElem};
use crate::lattice::{Dual, EvConstSeq, FinSupSeq, Model, Primal, Space, VecElem};
use crate::rational::{self, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for sub-task `index` of a seeded run.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r.random()
}

/// Small rational with numerator in `[-4, 4]` and denominator in `{1, 2, 3}`.
pub fn rational(rng: &mut SampleRng) -> Rational {
    rational::rat(rng.random_range(-4..=4), rng.random_range(1..=3))
}

pub fn positive_rational(rng: &mut SampleRng) -> Rational {
    rational::rat(rng.random_range(0..=4), rng.random_range(1..=3))
}

/// Highest sequence index the samplers touch.
pub const SEQ_EXTENT: usize = 6;

fn finsup(rng: &mut SampleRng, f: fn(&mut SampleRng) -> Rational) -> FinSupSeq {
    let count = rng.random_range(0..=3);
    FinSupSeq::from_pairs((0..count).map(|_| (rng.random_range(1..=SEQ_EXTENT), f(rng))))
}

fn evconst(rng: &mut SampleRng, f: fn(&mut SampleRng) -> Rational) -> EvConstSeq {
    let len = rng.random_range(0..=4);
    let prefix = (0..len).map(|_| f(rng)).collect();
    EvConstSeq::new(prefix, f(rng))
}

fn vector(rng: &mut SampleRng, n: usize, f: fn(&mut SampleRng) -> Rational) -> VecElem {
    VecElem::new((0..n).map(|_| f(rng)).collect())
}

fn primal_with(space: &Space, rng: &mut SampleRng, f: fn(&mut SampleRng) -> Rational) -> Primal {
    match space.model() {
        Model::Fin(n) => Primal::Vec(vector(rng, n, f)),
        Model::L1 => Primal::Finsup(finsup(rng, f)),
        Model::C => Primal::Evconst(evconst(rng, f)),
    }
}

pub fn primal(space: &Space, rng: &mut SampleRng) -> Primal {
    primal_with(space, rng, rational)
}

pub fn positive_primal(space: &Space, rng: &mut SampleRng) -> Primal {
    primal_with(space, rng, positive_rational)
}

fn dual_with(space: &Space, rng: &mut SampleRng, f: fn(&mut SampleRng) -> Rational) -> Dual {
    match space.model() {
        Model::Fin(n) => Dual::Vec(vector(rng, n, f)),
        Model::L1 => Dual::Evconst(evconst(rng, f)),
        Model::C => Dual::CDual(CDualElem::new(f(rng), finsup(rng, f))),
    }
}

pub fn dual(space: &Space, rng: &mut SampleRng) -> Dual {
    dual_with(space, rng, rational)
}

pub fn positive_dual(space: &Space, rng: &mut SampleRng) -> Dual {
    dual_with(space, rng, positive_rational)
}

fn bidual_with(space: &Space, rng: &mut SampleRng, f: fn(&mut SampleRng) -> Rational) -> Bidual {
    match space.model() {
        Model::Fin(n) => Bidual::Vec(vector(rng, n, f)),
        Model::L1 => Bidual::L1Bidual(L1BidualElem::new(finsup(rng, f), f(rng))),
        Model::C => Bidual::CBidual(CBidualElem::new(f(rng), evconst(rng, f))),
    }
}

pub fn bidual(space: &Space, rng: &mut SampleRng) -> Bidual {
    bidual_with(space, rng, rational)
}

pub fn positive_bidual(space: &Space, rng: &mut SampleRng) -> Bidual {
    bidual_with(space, rng, positive_rational)
}

/// Random bidual element with vanishing singular part.
pub fn oc_bidual(space: &Space, rng: &mut SampleRng) -> Bidual {
    match bidual(space, rng) {
        Bidual::L1Bidual(x) => Bidual::L1Bidual(L1BidualElem::new(x.a, rational::zero())),
        Bidual::CBidual(x) => Bidual::CBidual(CBidualElem::new(x.t.tail().clone(), x.t)),
        v => v,
    }
}
