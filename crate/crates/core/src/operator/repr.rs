use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::compose::Combination;
use super::form::Form;
use super::tensor::TensorOp;
use crate::error::{mismatch, Error, Result};
use crate::lattice::{Dual, Model, Primal, Space};
use crate::rational::{self, Rational};

/// Outcome of a structural multimorphism rule.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleVerdict {
    Yes,
    /// Argument tuple with `|A(x)| != A(|x|)`.
    No(Vec<Primal>),
}

/// A representation of a regular multilinear operator.
pub trait OperatorRepr: Send + Sync + fmt::Debug {
    fn kind(&self) -> &'static str;
    fn domain(&self) -> &[Space];
    fn codomain(&self) -> &Space;

    /// Index beyond which slice coefficients follow the order-pattern rule,
    /// uniformly in the dual functional.
    fn threshold(&self) -> usize;

    /// Definitional value; arguments are already checked against the domain.
    fn apply(&self, args: &[Primal]) -> Result<Primal>;

    /// The scalar form `y' ∘ A`; `y'` is already checked against the codomain.
    fn compose_dual(&self, y: &Dual) -> Result<Form>;

    fn modulus(&self) -> Result<RegOperator>;

    /// Positive and negative parts when the representation has a direct rule.
    fn parts(&self) -> Option<Result<(RegOperator, RegOperator)>> {
        None
    }

    fn positive_rule(&self) -> Option<bool>;

    fn multimorphism_rule(&self) -> Option<RuleVerdict>;

    fn to_json(&self) -> Value;

    fn as_tensor(&self) -> Option<&TensorOp> {
        None
    }
}

/// Shared handle to an operator representation.
#[derive(Clone)]
pub struct RegOperator(Arc<dyn OperatorRepr>);

impl fmt::Debug for RegOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl RegOperator {
    pub fn new(repr: impl OperatorRepr + 'static) -> RegOperator {
        RegOperator(Arc::new(repr))
    }

    pub fn repr(&self) -> &dyn OperatorRepr {
        &*self.0
    }

    pub fn kind(&self) -> &'static str {
        self.0.kind()
    }

    pub fn arity(&self) -> usize {
        self.0.domain().len()
    }

    pub fn domain(&self) -> &[Space] {
        self.0.domain()
    }

    pub fn codomain(&self) -> &Space {
        self.0.codomain()
    }

    pub fn threshold(&self) -> usize {
        self.0.threshold()
    }

    pub fn to_json(&self) -> Value {
        self.0.to_json()
    }

    pub fn as_tensor(&self) -> Option<&TensorOp> {
        self.0.as_tensor()
    }

    /// Whether every domain and the codomain are finite dimensional.
    pub fn is_finite_dimensional(&self) -> bool {
        self.domain().iter().all(Space::is_finite) && self.codomain().is_finite()
    }

    pub fn check_args(&self, args: &[Primal]) -> Result<()> {
        if args.len() != self.arity() {
            return Err(mismatch(format!(
                "{} expects {} arguments, got {}",
                self.kind(),
                self.arity(),
                args.len()
            )));
        }
        for (k, (x, s)) in args.iter().zip(self.domain()).enumerate() {
            if !x.belongs_to(s) {
                return Err(mismatch(format!("argument {} is not in {s}", k + 1)));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, args: &[Primal]) -> Result<Primal> {
        self.check_args(args)?;
        self.0.apply(args)
    }

    pub fn compose_dual(&self, y: &Dual) -> Result<Form> {
        if !y.belongs_to(self.codomain()) {
            return Err(mismatch(format!(
                "functional is not in the dual of {}",
                self.codomain()
            )));
        }
        self.0.compose_dual(y)
    }

    pub fn modulus(&self) -> Result<RegOperator> {
        if self.is_positive() {
            return Ok(self.clone());
        }
        self.0.modulus()
    }

    pub fn parts(&self) -> Result<(RegOperator, RegOperator)> {
        if let Some(p) = self.0.parts() {
            return p;
        }
        if self.is_positive() {
            return Ok((self.clone(), self.zero_like()));
        }
        let m = self.0.modulus()?;
        let half = rational::rat(1, 2);
        let pos = Combination::new(
            self.domain().to_vec(),
            self.codomain().clone(),
            vec![(half.clone(), m.clone()), (half.clone(), self.clone())],
        )?;
        let neg = Combination::new(
            self.domain().to_vec(),
            self.codomain().clone(),
            vec![(half.clone(), m), (-half, self.clone())],
        )?;
        Ok((RegOperator::new(pos), RegOperator::new(neg)))
    }

    pub fn pos_part(&self) -> Result<RegOperator> {
        Ok(self.parts()?.0)
    }

    pub fn neg_part(&self) -> Result<RegOperator> {
        Ok(self.parts()?.1)
    }

    /// Positivity by rule, falling back to the materialized tensor.
    pub fn is_positive(&self) -> bool {
        if let Some(b) = self.0.positive_rule() {
            return b;
        }
        match self.to_tensor() {
            Ok(t) => t.is_positive(),
            Err(_) => false,
        }
    }

    pub fn zero_like(&self) -> RegOperator {
        RegOperator::new(
            Combination::new(self.domain().to_vec(), self.codomain().clone(), Vec::new())
                .expect("empty combination is well formed"),
        )
    }

    pub fn scaled(&self, c: Rational) -> RegOperator {
        RegOperator::new(
            Combination::new(self.domain().to_vec(), self.codomain().clone(), vec![(c, self.clone())])
                .expect("single-term combination is well formed"),
        )
    }

    /// Dense tensor of a finite-dimensional operator, by evaluation on
    /// basis tuples.
    pub fn to_tensor(&self) -> Result<TensorOp> {
        if let Some(t) = self.as_tensor() {
            return Ok(t.clone());
        }
        if !self.is_finite_dimensional() {
            return Err(Error::Unsupported(format!(
                "{} is not finite dimensional",
                self.kind()
            )));
        }
        let dims: Vec<usize> = self.domain().iter().map(|s| s.fin_dim().expect("finite")).collect();
        let mut t = TensorOp::zeros(dims.clone(), self.codomain().clone())?;
        for idx in super::tensor::index_tuples(&dims) {
            let args: Vec<Primal> = idx
                .iter()
                .zip(&dims)
                .map(|(&i, &n)| Primal::Vec(crate::lattice::VecElem::unit(n, i)))
                .collect();
            let Primal::Vec(v) = self.evaluate(&args)? else {
                return Err(Error::InvariantViolation("finite operator left R^k".into()));
            };
            for (j, c) in v.coords().iter().enumerate() {
                t.set(&idx, j + 1, c.clone());
            }
        }
        Ok(t)
    }
}

/// Domain models as used by forms.
pub(crate) fn models(spaces: &[Space]) -> Vec<Model> {
    spaces.iter().map(Space::model).collect()
}
