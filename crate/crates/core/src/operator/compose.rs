use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::form::{Form, Idx};
use super::repr::{models, OperatorRepr, RegOperator, RuleVerdict};
use crate::bidual::{Bidual, CDualElem};
use crate::error::{mismatch, Error, Result};
use crate::lattice::{Dual, EvConstSeq, FinSupSeq, Model, Primal, Riesz, Space, VecElem};
use crate::linalg::Matrix;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMap {
    pub entries: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Space>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Space>,
}

/// Coordinate read-out `x ↦ (x_{p_1}, …, x_{p_k})` from a sequence model;
/// `limit` reads the tail of a c-model element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordsMap {
    pub source: Space,
    pub picks: Vec<Idx>,
}

/// A regular linear map between lattices, used for composites `u ∘ A`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeMap {
    Matrix(MatrixMap),
    Coords(CoordsMap),
}

impl LatticeMap {
    pub fn matrix(entries: Matrix) -> LatticeMap {
        LatticeMap::Matrix(MatrixMap {
            entries,
            source: None,
            target: None,
        })
    }

    pub fn matrix_between(entries: Matrix, source: Space, target: Space) -> Result<LatticeMap> {
        let u = LatticeMap::Matrix(MatrixMap {
            entries,
            source: Some(source),
            target: Some(target),
        });
        u.validate()?;
        Ok(u)
    }

    pub fn coords(source: Space, picks: Vec<Idx>) -> Result<LatticeMap> {
        let u = LatticeMap::Coords(CoordsMap { source, picks });
        u.validate()?;
        Ok(u)
    }

    pub fn identity(space: &Space) -> Result<LatticeMap> {
        let n = space
            .fin_dim()
            .ok_or_else(|| Error::Unsupported("identity map is provided for finite spaces only".into()))?;
        LatticeMap::matrix_between(Matrix::identity(n), space.clone(), space.clone())
    }

    pub fn source(&self) -> Space {
        match self {
            LatticeMap::Matrix(m) => m.source.clone().unwrap_or_else(|| Space::FinDim(m.entries.cols)),
            LatticeMap::Coords(c) => c.source.clone(),
        }
    }

    pub fn target(&self) -> Space {
        match self {
            LatticeMap::Matrix(m) => m.target.clone().unwrap_or_else(|| Space::FinDim(m.entries.rows)),
            LatticeMap::Coords(c) => Space::FinDim(c.picks.len()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LatticeMap::Matrix(m) => {
                if self.source().fin_dim() != Some(m.entries.cols) || self.target().fin_dim() != Some(m.entries.rows) {
                    return Err(mismatch("matrix shape does not match its source and target"));
                }
            }
            LatticeMap::Coords(c) => {
                if c.picks.is_empty() {
                    return Err(mismatch("coordinate map needs at least one pick"));
                }
                match c.source.model() {
                    Model::C => {}
                    Model::L1 if c.picks.iter().all(|i| i.finite().is_some()) => {}
                    Model::L1 => return Err(mismatch("the ℓ_1-model has no limit coordinate")),
                    Model::Fin(_) => return Err(mismatch("use a matrix for finite-dimensional sources")),
                }
            }
        }
        Ok(())
    }

    pub fn threshold(&self) -> usize {
        match self {
            LatticeMap::Matrix(_) => 0,
            LatticeMap::Coords(c) => c.picks.iter().filter_map(|i| i.finite()).max().unwrap_or(0),
        }
    }

    pub fn is_hom(&self) -> bool {
        match self {
            LatticeMap::Matrix(m) => m.entries.is_structural_hom(),
            LatticeMap::Coords(_) => true,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            LatticeMap::Matrix(m) => m.entries.is_positive(),
            LatticeMap::Coords(_) => true,
        }
    }

    pub fn apply(&self, x: &Primal) -> Result<Primal> {
        match (self, x) {
            (LatticeMap::Matrix(m), Primal::Vec(v)) => Ok(Primal::Vec(m.entries.apply(v)?)),
            (LatticeMap::Coords(c), Primal::Finsup(s)) => Ok(Primal::Vec(VecElem::new(
                c.picks.iter().map(|i| s.get(i.finite().expect("validated"))).collect(),
            ))),
            (LatticeMap::Coords(c), Primal::Evconst(s)) => Ok(Primal::Vec(VecElem::new(
                c.picks
                    .iter()
                    .map(|i| match i {
                        Idx::At(k) => s.get(*k),
                        Idx::Limit => s.tail().clone(),
                    })
                    .collect(),
            ))),
            _ => Err(mismatch("lattice map applied outside its source")),
        }
    }

    /// Adjoint `u'`: dual of the target to dual of the source.
    pub fn dual(&self, y: &Dual) -> Result<Dual> {
        match (self, y) {
            (LatticeMap::Matrix(m), Dual::Vec(y)) => Ok(Dual::Vec(m.entries.transpose().apply(y)?)),
            (LatticeMap::Coords(c), Dual::Vec(y)) if y.len() == c.picks.len() => {
                let mut a = FinSupSeq::zero();
                let mut b = rational::zero();
                for (i, yj) in c.picks.iter().zip(y.coords()) {
                    match i {
                        Idx::At(k) => a.set(*k, &a.get(*k) + yj),
                        Idx::Limit => b += yj,
                    }
                }
                Ok(match c.source.model() {
                    Model::L1 => Dual::Evconst(EvConstSeq::from_fn(a.max_index(), rational::zero(), |k| a.get(k))),
                    _ => Dual::CDual(CDualElem::new(b, a)),
                })
            }
            _ => Err(mismatch("adjoint applied outside the target dual")),
        }
    }

    /// Bidual map `u''`: bidual of the source to bidual of the target.
    pub fn bidual(&self, x: &Bidual) -> Result<Bidual> {
        match (self, x) {
            (LatticeMap::Matrix(m), Bidual::Vec(v)) => Ok(Bidual::Vec(m.entries.apply(v)?)),
            (LatticeMap::Coords(c), Bidual::L1Bidual(e)) => Ok(Bidual::Vec(VecElem::new(
                c.picks.iter().map(|i| e.a.get(i.finite().expect("validated"))).collect(),
            ))),
            (LatticeMap::Coords(c), Bidual::CBidual(e)) => Ok(Bidual::Vec(VecElem::new(
                c.picks
                    .iter()
                    .map(|i| match i {
                        Idx::At(k) => e.t.get(*k),
                        Idx::Limit => e.beta.clone(),
                    })
                    .collect(),
            ))),
            _ => Err(mismatch("bidual map applied outside the source bidual")),
        }
    }
}

fn same_shape(a: &Space, b: &Space) -> bool {
    a.model() == b.model()
}

/// `u ∘ A` for a lattice map `u` on the codomain of `A`.
#[derive(Debug, Clone)]
pub struct HomComposite {
    u: LatticeMap,
    inner: RegOperator,
    codomain: Space,
}

impl HomComposite {
    pub fn new(u: LatticeMap, inner: RegOperator) -> Result<HomComposite> {
        u.validate()?;
        if !same_shape(&u.source(), inner.codomain()) {
            return Err(mismatch(format!(
                "map from {} cannot follow an operator into {}",
                u.source(),
                inner.codomain()
            )));
        }
        Ok(HomComposite {
            codomain: u.target(),
            u,
            inner,
        })
    }

    pub fn map(&self) -> &LatticeMap {
        &self.u
    }

    pub fn inner(&self) -> &RegOperator {
        &self.inner
    }
}

pub fn compose_hom(u: LatticeMap, a: &RegOperator) -> Result<RegOperator> {
    Ok(RegOperator::new(HomComposite::new(u, a.clone())?))
}

impl OperatorRepr for HomComposite {
    fn kind(&self) -> &'static str {
        "hom_composite"
    }
    fn domain(&self) -> &[Space] {
        self.inner.domain()
    }
    fn codomain(&self) -> &Space {
        &self.codomain
    }
    fn threshold(&self) -> usize {
        self.inner.threshold().max(self.u.threshold())
    }
    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        self.u.apply(&self.inner.evaluate(args)?)
    }
    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        self.inner.compose_dual(&self.u.dual(y)?)
    }
    fn modulus(&self) -> Result<RegOperator> {
        if self.u.is_hom() {
            return compose_hom(self.u.clone(), &self.inner.modulus()?);
        }
        let me = RegOperator::new(self.clone());
        match me.to_tensor() {
            Ok(t) => t.modulus(),
            Err(_) => Err(Error::Unsupported(
                "modulus of a composite with a non-homomorphic map on a sequence model".into(),
            )),
        }
    }
    fn positive_rule(&self) -> Option<bool> {
        if self.u.is_positive() && self.inner.is_positive() {
            return Some(true);
        }
        None
    }
    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        if self.u.is_hom() && self.inner.repr().multimorphism_rule() == Some(RuleVerdict::Yes) {
            return Some(RuleVerdict::Yes);
        }
        None
    }
    fn to_json(&self) -> Value {
        json!({"kind": "hom_composite", "u": self.u, "inner": self.inner.to_json()})
    }
}

/// `Σ λ_i A_i` over operators with a common domain and codomain.
#[derive(Debug, Clone)]
pub struct Combination {
    domain: Vec<Space>,
    codomain: Space,
    terms: Vec<(Rational, RegOperator)>,
}

impl Combination {
    pub fn new(domain: Vec<Space>, codomain: Space, terms: Vec<(Rational, RegOperator)>) -> Result<Combination> {
        for (_, a) in &terms {
            if a.arity() != domain.len()
                || a.domain().iter().zip(&domain).any(|(x, y)| !same_shape(x, y))
                || !same_shape(a.codomain(), &codomain)
            {
                return Err(mismatch("combined operators have different shapes"));
            }
        }
        Ok(Combination { domain, codomain, terms })
    }
}

impl OperatorRepr for Combination {
    fn kind(&self) -> &'static str {
        "combination"
    }
    fn domain(&self) -> &[Space] {
        &self.domain
    }
    fn codomain(&self) -> &Space {
        &self.codomain
    }
    fn threshold(&self) -> usize {
        self.terms.iter().map(|(_, a)| a.threshold()).max().unwrap_or(0)
    }
    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        let mut acc = Primal::zero_of(&self.codomain);
        for (l, a) in &self.terms {
            acc = acc.add(&a.evaluate(args)?.scale(l));
        }
        Ok(acc)
    }
    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        let forms = self
            .terms
            .iter()
            .map(|(l, a)| Ok((l.clone(), a.compose_dual(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Form::linear_combination(models(&self.domain), forms)
    }
    fn modulus(&self) -> Result<RegOperator> {
        let me = RegOperator::new(self.clone());
        match me.to_tensor() {
            Ok(t) => t.modulus(),
            Err(_) => Err(Error::Unsupported("modulus of a combination on a sequence model".into())),
        }
    }
    fn positive_rule(&self) -> Option<bool> {
        if self.terms.iter().all(|(l, a)| !l.is_zero() && *l > rational::zero() && a.is_positive()) {
            return Some(true);
        }
        None
    }
    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        if self.terms.is_empty() {
            return Some(RuleVerdict::Yes);
        }
        None
    }
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, a)| {
                let (n, d) = rational::to_pair(l);
                json!([[n, d], a.to_json()])
            })
            .collect();
        json!({"kind": "combination", "domain": self.domain, "codomain": self.codomain, "terms": terms})
    }
}
