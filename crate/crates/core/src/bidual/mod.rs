//! Dual and bidual models for the sequence spaces.
//!
//! The ℓ_1-model bidual carries an order-continuous part plus a mass `mu`
//! on the generalized limit `L`; the c-model dual carries a mass `b` on the
//! limit functional, and its bidual a mass `beta` dual to it.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Result};
use crate::lattice::{riesz_enum, Dual, EvConstSeq, FinSupSeq, Model, Primal, Riesz, Space, VecElem};
use crate::rational::{self, Rational};

/// Order-bounded functional on the c-model: `x ↦ b·tail(x) + Σ a_i x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CDualElem {
    #[serde(with = "rational::pair")]
    pub b: Rational,
    pub a: FinSupSeq,
}

impl CDualElem {
    pub fn new(b: Rational, a: FinSupSeq) -> Self {
        CDualElem { b, a }
    }

    /// The limit functional.
    pub fn limit() -> Self {
        CDualElem::new(rational::one(), FinSupSeq::zero())
    }

    pub fn coordinate(i: usize) -> Self {
        CDualElem::new(rational::zero(), FinSupSeq::unit(i))
    }

    pub fn zero() -> Self {
        CDualElem::new(rational::zero(), FinSupSeq::zero())
    }

    pub fn apply(&self, x: &EvConstSeq) -> Rational {
        let mut s = &self.b * x.tail();
        for (i, ai) in self.a.iter() {
            s += ai * x.get(i);
        }
        s
    }
}

impl Riesz for CDualElem {
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn sup(&self, o: &Self) -> Self {
        CDualElem::new(rational::max(&self.b, &o.b), self.a.sup(&o.a))
    }
    fn inf(&self, o: &Self) -> Self {
        CDualElem::new(rational::min(&self.b, &o.b), self.a.inf(&o.a))
    }
    fn add(&self, o: &Self) -> Self {
        CDualElem::new(&self.b + &o.b, self.a.add(&o.a))
    }
    fn scale(&self, c: &Rational) -> Self {
        CDualElem::new(&self.b * c, self.a.scale(c))
    }
    fn zero_like(&self) -> Self {
        CDualElem::zero()
    }
    fn is_positive(&self) -> bool {
        !self.b.is_negative() && self.a.is_positive()
    }
    fn is_zero(&self) -> bool {
        self.b.is_zero() && self.a.is_zero()
    }
}

/// ℓ_1-model bidual element acting on `t` by `Σ a_i t_i + mu·tail(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct L1BidualElem {
    pub a: FinSupSeq,
    #[serde(with = "rational::pair")]
    pub mu: Rational,
}

impl L1BidualElem {
    pub fn new(a: FinSupSeq, mu: Rational) -> Self {
        L1BidualElem { a, mu }
    }

    /// The generalized limit `L = (0, 1)`.
    pub fn limit() -> Self {
        L1BidualElem::new(FinSupSeq::zero(), rational::one())
    }

    pub fn apply(&self, t: &EvConstSeq) -> Rational {
        let mut s = &self.mu * t.tail();
        for (i, ai) in self.a.iter() {
            s += ai * t.get(i);
        }
        s
    }
}

impl Riesz for L1BidualElem {
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn sup(&self, o: &Self) -> Self {
        L1BidualElem::new(self.a.sup(&o.a), rational::max(&self.mu, &o.mu))
    }
    fn inf(&self, o: &Self) -> Self {
        L1BidualElem::new(self.a.inf(&o.a), rational::min(&self.mu, &o.mu))
    }
    fn add(&self, o: &Self) -> Self {
        L1BidualElem::new(self.a.add(&o.a), &self.mu + &o.mu)
    }
    fn scale(&self, c: &Rational) -> Self {
        L1BidualElem::new(self.a.scale(c), &self.mu * c)
    }
    fn zero_like(&self) -> Self {
        L1BidualElem::new(FinSupSeq::zero(), rational::zero())
    }
    fn is_positive(&self) -> bool {
        self.a.is_positive() && !self.mu.is_negative()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.mu.is_zero()
    }
}

/// c-model bidual element acting on `(b, a)` by `beta·b + Σ t_i a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CBidualWire", into = "CBidualWire")]
pub struct CBidualElem {
    pub beta: Rational,
    pub t: EvConstSeq,
}

#[derive(Serialize, Deserialize)]
struct CBidualWire {
    #[serde(with = "rational::pair")]
    beta: Rational,
    #[serde(with = "rational::pair_vec")]
    prefix: Vec<Rational>,
    #[serde(with = "rational::pair")]
    tail: Rational,
}

impl TryFrom<CBidualWire> for CBidualElem {
    type Error = String;
    fn try_from(w: CBidualWire) -> Result<Self, String> {
        Ok(CBidualElem::new(w.beta, EvConstSeq::new(w.prefix, w.tail)))
    }
}

impl From<CBidualElem> for CBidualWire {
    fn from(x: CBidualElem) -> Self {
        CBidualWire {
            beta: x.beta,
            prefix: x.t.prefix().to_vec(),
            tail: x.t.tail().clone(),
        }
    }
}

impl CBidualElem {
    pub fn new(beta: Rational, t: EvConstSeq) -> Self {
        CBidualElem { beta, t }
    }

    pub fn apply(&self, f: &CDualElem) -> Rational {
        let mut s = &self.beta * &f.b;
        for (i, ai) in f.a.iter() {
            s += ai * self.t.get(i);
        }
        s
    }
}

impl Riesz for CBidualElem {
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn sup(&self, o: &Self) -> Self {
        CBidualElem::new(rational::max(&self.beta, &o.beta), self.t.sup(&o.t))
    }
    fn inf(&self, o: &Self) -> Self {
        CBidualElem::new(rational::min(&self.beta, &o.beta), self.t.inf(&o.t))
    }
    fn add(&self, o: &Self) -> Self {
        CBidualElem::new(&self.beta + &o.beta, self.t.add(&o.t))
    }
    fn scale(&self, c: &Rational) -> Self {
        CBidualElem::new(&self.beta * c, self.t.scale(c))
    }
    fn zero_like(&self) -> Self {
        CBidualElem::new(rational::zero(), EvConstSeq::constant(rational::zero()))
    }
    fn is_positive(&self) -> bool {
        !self.beta.is_negative() && self.t.is_positive()
    }
    fn is_zero(&self) -> bool {
        self.beta.is_zero() && self.t.is_zero()
    }
}

/// An element of a bidual model.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bidual {
    Vec(VecElem),
    L1Bidual(L1BidualElem),
    CBidual(CBidualElem),
}

riesz_enum!(Bidual { Vec, L1Bidual, CBidual });

impl Bidual {
    pub fn limit_l1() -> Bidual {
        Bidual::L1Bidual(L1BidualElem::limit())
    }

    pub fn belongs_to(&self, space: &Space) -> bool {
        match (self, space.model()) {
            (Bidual::Vec(v), Model::Fin(n)) => v.len() == n,
            (Bidual::L1Bidual(_), Model::L1) | (Bidual::CBidual(_), Model::C) => true,
            _ => false,
        }
    }

    pub fn zero_of(space: &Space) -> Bidual {
        embed_j(&Primal::zero_of(space))
    }

    pub fn model(&self) -> Model {
        match self {
            Bidual::Vec(v) => Model::Fin(v.len()),
            Bidual::L1Bidual(_) => Model::L1,
            Bidual::CBidual(_) => Model::C,
        }
    }

    /// Largest finite coordinate index that carries information.
    pub fn index_extent(&self) -> usize {
        match self {
            Bidual::Vec(v) => v.len(),
            Bidual::L1Bidual(x) => x.a.max_index(),
            Bidual::CBidual(x) => x.t.prefix_len(),
        }
    }

    /// Bidual pairing `x''(f)`.
    pub fn apply(&self, f: &Dual) -> Result<Rational> {
        match (self, f) {
            (Bidual::Vec(x), Dual::Vec(f)) if x.len() == f.len() => Ok(x.dot(f)),
            (Bidual::L1Bidual(x), Dual::Evconst(t)) => Ok(x.apply(t)),
            (Bidual::CBidual(x), Dual::CDual(f)) => Ok(x.apply(f)),
            _ => Err(mismatch("bidual element does not act on this dual model")),
        }
    }
}

/// Canonical embedding `J` of a space into its bidual model.
pub fn embed_j(x: &Primal) -> Bidual {
    match x {
        Primal::Vec(v) => Bidual::Vec(v.clone()),
        Primal::Finsup(x) => Bidual::L1Bidual(L1BidualElem::new(x.clone(), rational::zero())),
        Primal::Evconst(x) => Bidual::CBidual(CBidualElem::new(x.tail().clone(), x.clone())),
    }
}

/// [`embed_j`] with a membership check against `space`.
pub fn embed_j_in(x: &Primal, space: &Space) -> Result<Bidual> {
    if !x.belongs_to(space) {
        return Err(mismatch(format!("element is not in {space}")));
    }
    Ok(embed_j(x))
}

pub fn model_modulus(x: &Bidual) -> Bidual {
    x.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OcSplit {
    pub oc_part: Bidual,
    pub singular_part: Bidual,
}

/// Split a bidual element into its order-continuous part and its singular
/// part. Finite-dimensional elements are entirely order continuous.
pub fn classify_order_continuity(x: &Bidual) -> OcSplit {
    match x {
        Bidual::Vec(_) => OcSplit {
            oc_part: x.clone(),
            singular_part: x.zero_like(),
        },
        Bidual::L1Bidual(e) => OcSplit {
            oc_part: Bidual::L1Bidual(L1BidualElem::new(e.a.clone(), rational::zero())),
            singular_part: Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::zero(), e.mu.clone())),
        },
        Bidual::CBidual(e) => {
            let oc = CBidualElem::new(e.t.tail().clone(), e.t.clone());
            let sing = CBidualElem::new(
                &e.beta - e.t.tail(),
                EvConstSeq::constant(rational::zero()),
            );
            OcSplit {
                oc_part: Bidual::CBidual(oc),
                singular_part: Bidual::CBidual(sing),
            }
        }
    }
}

/// Whether the singular part vanishes.
pub fn is_order_continuous(x: &Bidual) -> bool {
    classify_order_continuity(x).singular_part.is_zero()
}

/// The `n`-th member of a primal sequence whose `J`-images converge to `x`
/// against every fixed dual element.
pub fn approximants(x: &Bidual, n: usize) -> Primal {
    assert!(n >= 1, "approximant index starts at 1");
    match x {
        Bidual::Vec(v) => Primal::Vec(v.clone()),
        Bidual::L1Bidual(e) => {
            let mut seq = e.a.clone();
            if !e.mu.is_zero() {
                let idx = n + e.a.max_index() + 1;
                seq.set(idx, &seq.get(idx) + &e.mu);
            }
            Primal::Finsup(seq)
        }
        Bidual::CBidual(e) => {
            let len = n + e.t.prefix_len();
            Primal::Evconst(EvConstSeq::from_fn(len, e.beta.clone(), |i| e.t.get(i)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::pairing;
    use crate::rational::{int, rat};

    fn ev(prefix: &[i64], tail: i64) -> EvConstSeq {
        EvConstSeq::new(prefix.iter().map(|&x| int(x)).collect(), int(tail))
    }

    #[test]
    fn embeddings() {
        let e3 = Primal::Finsup(FinSupSeq::unit(3));
        assert_eq!(
            embed_j(&e3),
            Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::unit(3), int(0)))
        );
        let x = Primal::Evconst(ev(&[5], 2));
        assert_eq!(embed_j(&x), Bidual::CBidual(CBidualElem::new(int(2), ev(&[5], 2))));
        let v = Primal::Vec(VecElem::from_ints(&[1, -1]));
        assert_eq!(embed_j(&v), Bidual::Vec(VecElem::from_ints(&[1, -1])));
    }

    #[test]
    fn moduli() {
        let x = Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::from_pairs([(1, int(-2))]), int(-3)));
        assert_eq!(
            model_modulus(&x),
            Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::from_pairs([(1, int(2))]), int(3)))
        );
        let y = Bidual::CBidual(CBidualElem::new(int(-1), ev(&[2, -2], 0)));
        assert_eq!(model_modulus(&y), Bidual::CBidual(CBidualElem::new(int(1), ev(&[2, 2], 0))));
        let v = Primal::Vec(VecElem::from_ints(&[1, -4]));
        assert_eq!(model_modulus(&embed_j(&v)), embed_j(&Primal::Vec(VecElem::from_ints(&[1, 4]))));
    }

    #[test]
    fn oc_split() {
        let x = Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::unit(2), int(5)));
        let s = classify_order_continuity(&x);
        assert_eq!(s.oc_part, Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::unit(2), int(0))));
        assert_eq!(s.singular_part, Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::zero(), int(5))));

        let j = embed_j(&Primal::Finsup(FinSupSeq::unit(7)));
        assert!(classify_order_continuity(&j).singular_part.is_zero());

        let c = Bidual::CBidual(CBidualElem::new(int(3), EvConstSeq::constant(int(1))));
        let s = classify_order_continuity(&c);
        assert_eq!(s.oc_part, embed_j(&Primal::Evconst(EvConstSeq::constant(int(1)))));
        assert_eq!(
            s.singular_part,
            Bidual::CBidual(CBidualElem::new(int(2), EvConstSeq::constant(int(0))))
        );
        for i in 1..6 {
            let f = Dual::CDual(CDualElem::coordinate(i));
            assert_eq!(s.singular_part.apply(&f).unwrap(), int(0));
        }
        assert_eq!(s.oc_part.add(&s.singular_part), c);
    }

    #[test]
    fn approximant_examples() {
        let l = Bidual::limit_l1();
        assert_eq!(approximants(&l, 3), Primal::Finsup(FinSupSeq::unit(4)));
        let ones = Dual::Evconst(EvConstSeq::constant(int(1)));
        assert_eq!(pairing(&ones, &approximants(&l, 3)).unwrap(), l.apply(&ones).unwrap());

        let c = Bidual::CBidual(CBidualElem::new(int(2), ev(&[7], 1)));
        let a1 = approximants(&c, 1);
        assert_eq!(a1, Primal::Evconst(ev(&[7, 1], 2)));
        let lim = Dual::CDual(CDualElem::limit());
        assert_eq!(pairing(&lim, &a1).unwrap(), int(2));
    }

    #[test]
    fn json_forms() {
        let x = Bidual::L1Bidual(L1BidualElem::new(FinSupSeq::from_pairs([(2, rat(1, 2))]), int(1)));
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"l1_bidual":{"a":[[2,1,2]],"mu":[1,1]}}"#
        );
        let y = Bidual::CBidual(CBidualElem::new(int(2), ev(&[7], 1)));
        let s = serde_json::to_string(&y).unwrap();
        assert_eq!(s, r#"{"c_bidual":{"beta":[2,1],"prefix":[[7,1]],"tail":[1,1]}}"#);
        assert_eq!(serde_json::from_str::<Bidual>(&s).unwrap(), y);
    }
}
