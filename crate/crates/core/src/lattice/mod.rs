//! Exact-rational lattice elements for the supported space models, the
//! duality pairing between a space and its dual model, and Riesz
//! homomorphism detection for finite-dimensional maps.

mod evconst;
mod finsup;
mod hom;
mod space;
mod vec_elem;

pub use evconst::EvConstSeq;
pub use finsup::FinSupSeq;
pub use hom::{is_riesz_hom, HomVerdict};
pub use space::{Model, Role, Space, SpaceRef};
pub use vec_elem::VecElem;

use serde::{Deserialize, Serialize};

use crate::bidual::CDualElem;
use crate::error::{mismatch, Result};
use crate::rational::Rational;

/// Vector-lattice operations shared by every element model.
///
/// Binary operations assume both operands live in the same space; the
/// checked entry points ([`lattice_ops`], [`order_leq`]) verify that first.
pub trait Riesz: Clone + PartialEq + std::fmt::Debug {
    fn compatible(&self, other: &Self) -> bool;
    fn sup(&self, other: &Self) -> Self;
    fn inf(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn zero_like(&self) -> Self;
    /// Membership in the positive cone.
    fn is_positive(&self) -> bool;
    fn is_zero(&self) -> bool;

    fn negated(&self) -> Self {
        self.scale(&-crate::rational::one())
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.negated())
    }
    fn abs(&self) -> Self {
        self.sup(&self.negated())
    }
    fn pos_part(&self) -> Self {
        self.sup(&self.zero_like())
    }
    fn neg_part(&self) -> Self {
        self.negated().sup(&self.zero_like())
    }
    fn leq(&self, other: &Self) -> bool {
        other.sub(self).is_positive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeOps<T> {
    pub sup: T,
    pub inf: T,
    pub abs: T,
    pub pos: T,
    pub neg: T,
}

pub fn lattice_ops<T: Riesz>(x: &T, y: &T) -> Result<LatticeOps<T>> {
    if !x.compatible(y) {
        return Err(mismatch("lattice operands live in different spaces"));
    }
    Ok(LatticeOps {
        sup: x.sup(y),
        inf: x.inf(y),
        abs: x.abs(),
        pos: x.pos_part(),
        neg: x.neg_part(),
    })
}

pub fn order_leq<T: Riesz>(x: &T, y: &T) -> Result<bool> {
    if !x.compatible(y) {
        return Err(mismatch("order comparison across spaces"));
    }
    Ok(x.leq(y))
}

/// An element of a primal space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primal {
    /// `FinDim(n)` and flattened direct sums.
    Vec(VecElem),
    /// The ℓ_1-model.
    Finsup(FinSupSeq),
    /// The c-model.
    Evconst(EvConstSeq),
}

/// An element of a dual model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dual {
    Vec(VecElem),
    /// Dual of the ℓ_1-model.
    Evconst(EvConstSeq),
    /// Dual of the c-model.
    CDual(CDualElem),
}

macro_rules! riesz_enum {
    ($ty:ident { $($var:ident),* }) => {
        impl Riesz for $ty {
            fn compatible(&self, other: &Self) -> bool {
                match (self, other) {
                    $(($ty::$var(a), $ty::$var(b)) => a.compatible(b),)*
                    _ => false,
                }
            }
            fn sup(&self, other: &Self) -> Self {
                match (self, other) {
                    $(($ty::$var(a), $ty::$var(b)) => $ty::$var(a.sup(b)),)*
                    _ => panic!("sup across models"),
                }
            }
            fn inf(&self, other: &Self) -> Self {
                match (self, other) {
                    $(($ty::$var(a), $ty::$var(b)) => $ty::$var(a.inf(b)),)*
                    _ => panic!("inf across models"),
                }
            }
            fn add(&self, other: &Self) -> Self {
                match (self, other) {
                    $(($ty::$var(a), $ty::$var(b)) => $ty::$var(a.add(b)),)*
                    _ => panic!("add across models"),
                }
            }
            fn scale(&self, c: &Rational) -> Self {
                match self {
                    $($ty::$var(a) => $ty::$var(a.scale(c)),)*
                }
            }
            fn zero_like(&self) -> Self {
                match self {
                    $($ty::$var(a) => $ty::$var(a.zero_like()),)*
                }
            }
            fn is_positive(&self) -> bool {
                match self {
                    $($ty::$var(a) => a.is_positive(),)*
                }
            }
            fn is_zero(&self) -> bool {
                match self {
                    $($ty::$var(a) => a.is_zero(),)*
                }
            }
        }
    };
}

riesz_enum!(Primal { Vec, Finsup, Evconst });
riesz_enum!(Dual { Vec, Evconst, CDual });
pub(crate) use riesz_enum;

impl Primal {
    /// Whether this element lives in (the primal role of) `space`.
    pub fn belongs_to(&self, space: &Space) -> bool {
        match (self, space.model()) {
            (Primal::Vec(v), Model::Fin(n)) => v.len() == n,
            (Primal::Finsup(_), Model::L1) | (Primal::Evconst(_), Model::C) => true,
            _ => false,
        }
    }

    pub fn zero_of(space: &Space) -> Primal {
        match space.model() {
            Model::Fin(n) => Primal::Vec(VecElem::zeros(n)),
            Model::L1 => Primal::Finsup(FinSupSeq::zero()),
            Model::C => Primal::Evconst(EvConstSeq::constant(crate::rational::zero())),
        }
    }

    /// Largest finite coordinate index that carries information.
    pub fn index_extent(&self) -> usize {
        match self {
            Primal::Vec(v) => v.len(),
            Primal::Finsup(x) => x.max_index(),
            Primal::Evconst(x) => x.prefix_len(),
        }
    }

    /// Coordinate `i` (1-based).
    pub fn coord(&self, i: usize) -> Rational {
        match self {
            Primal::Vec(v) => v.get(i),
            Primal::Finsup(x) => x.get(i),
            Primal::Evconst(x) => x.get(i),
        }
    }
}

impl Dual {
    pub fn belongs_to(&self, space: &Space) -> bool {
        match (self, space.model()) {
            (Dual::Vec(v), Model::Fin(n)) => v.len() == n,
            (Dual::Evconst(_), Model::L1) | (Dual::CDual(_), Model::C) => true,
            _ => false,
        }
    }

    pub fn zero_of(space: &Space) -> Dual {
        match space.model() {
            Model::Fin(n) => Dual::Vec(VecElem::zeros(n)),
            Model::L1 => Dual::Evconst(EvConstSeq::constant(crate::rational::zero())),
            Model::C => Dual::CDual(CDualElem::zero()),
        }
    }

    pub fn index_extent(&self) -> usize {
        match self {
            Dual::Vec(v) => v.len(),
            Dual::Evconst(t) => t.prefix_len(),
            Dual::CDual(f) => f.a.max_index(),
        }
    }

    /// Coordinate functional `e_i*` of the given space.
    pub fn coordinate(space: &Space, i: usize) -> Dual {
        match space.model() {
            Model::Fin(n) => Dual::Vec(VecElem::unit(n, i)),
            Model::L1 => Dual::Evconst(EvConstSeq::unit(i)),
            Model::C => Dual::CDual(CDualElem::coordinate(i)),
        }
    }
}

/// Duality pairing `f(x)` between a dual-model element and a primal element.
pub fn pairing(f: &Dual, x: &Primal) -> Result<Rational> {
    match (f, x) {
        (Dual::Vec(f), Primal::Vec(x)) => {
            if f.len() != x.len() {
                return Err(mismatch(format!(
                    "pairing dimension {} against {}",
                    f.len(),
                    x.len()
                )));
            }
            Ok(f.dot(x))
        }
        (Dual::Evconst(t), Primal::Finsup(x)) => {
            Ok(x.iter().map(|(i, xi)| t.get(i) * xi).sum())
        }
        (Dual::CDual(f), Primal::Evconst(x)) => Ok(f.apply(x)),
        _ => Err(mismatch("dual element does not act on this primal model")),
    }
}

/// Pairing that also checks both sides against `space`.
pub fn pairing_in(f: &Dual, x: &Primal, space: &Space) -> Result<Rational> {
    if !f.belongs_to(space) || !x.belongs_to(space) {
        return Err(mismatch(format!("pairing arguments are not in {space}")));
    }
    pairing(f, x)
}
