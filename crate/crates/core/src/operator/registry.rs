//! Operators built from JSON specs by kind name.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde_json::Value;

use super::catalog::{CoordProduct, FiniteRankProduct, UpperTriangular, WeightedDiagonal};
use super::compose::{Combination, HomComposite, LatticeMap};
use super::repr::RegOperator;
use super::tensor::TensorOp;
use crate::error::{Error, Result};
use crate::lattice::{Dual, EvConstSeq, Primal, Space};
use crate::rational::{self, Rational};

/// Named spaces and operators that specs may refer to by string.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub spaces: BTreeMap<String, Space>,
    pub operators: BTreeMap<String, RegOperator>,
}

impl Context {
    pub fn space(&self, v: &Value) -> Result<Space> {
        let s = match v {
            Value::String(name) => self
                .spaces
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("unknown space `{name}`")))?,
            other => parse(other, "space")?,
        };
        s.validate().map_err(Error::Parse)?;
        Ok(s)
    }
}

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn field<'a>(spec: &'a Value, name: &str) -> Result<&'a Value> {
    spec.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field `{name}`")))
}

fn arity(spec: &Value) -> Result<usize> {
    field(spec, "arity")?
        .as_u64()
        .filter(|&m| m >= 1)
        .map(|m| m as usize)
        .ok_or_else(|| Error::Parse("`arity` must be a positive integer".into()))
}

pub trait OperatorBuilder: Send + Sync {
    fn kind(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn build(&self, spec: &Value, reg: &OperatorRegistry, ctx: &Context) -> Result<RegOperator>;
}

struct TensorBuilder;
impl OperatorBuilder for TensorBuilder {
    fn kind(&self) -> &'static str {
        "tensor"
    }
    fn summary(&self) -> &'static str {
        "dense rational tensor on finite-dimensional spaces"
    }
    fn build(&self, spec: &Value, _: &OperatorRegistry, _: &Context) -> Result<RegOperator> {
        Ok(RegOperator::new(TensorOp::from_json(spec)?))
    }
}

struct CoordProductBuilder;
impl OperatorBuilder for CoordProductBuilder {
    fn kind(&self) -> &'static str {
        "coord_product"
    }
    fn summary(&self) -> &'static str {
        "coordinatewise product x_1 ⋯ x_m into the same space"
    }
    fn build(&self, spec: &Value, _: &OperatorRegistry, ctx: &Context) -> Result<RegOperator> {
        Ok(RegOperator::new(CoordProduct::new(ctx.space(field(spec, "space")?)?, arity(spec)?)?))
    }
}

struct UpperTriangularBuilder;
impl OperatorBuilder for UpperTriangularBuilder {
    fn kind(&self) -> &'static str {
        "upper_triangular"
    }
    fn summary(&self) -> &'static str {
        "scalar form Σ_{i≤j} x_i y_j on a sequence model"
    }
    fn build(&self, spec: &Value, _: &OperatorRegistry, ctx: &Context) -> Result<RegOperator> {
        let space = match spec.get("space") {
            Some(s) => ctx.space(s)?,
            None => Space::SeqL1,
        };
        Ok(RegOperator::new(UpperTriangular::new(space)?))
    }
}

struct FiniteRankBuilder;
impl OperatorBuilder for FiniteRankBuilder {
    fn kind(&self) -> &'static str {
        "finite_rank"
    }
    fn summary(&self) -> &'static str {
        "product of functionals times a fixed vector, (φ_1 ⊗ … ⊗ φ_m)·v"
    }
    fn build(&self, spec: &Value, _: &OperatorRegistry, ctx: &Context) -> Result<RegOperator> {
        let domain = field(spec, "domain")?
            .as_array()
            .ok_or_else(|| Error::Parse("`domain` must be a list".into()))?
            .iter()
            .map(|s| ctx.space(s))
            .collect::<Result<Vec<_>>>()?;
        let phi: Vec<Dual> = parse(field(spec, "phi")?, "phi")?;
        let v: Primal = parse(field(spec, "v")?, "v")?;
        let codomain = ctx.space(field(spec, "codomain")?)?;
        Ok(RegOperator::new(FiniteRankProduct::new(domain, phi, v, codomain)?))
    }
}

struct WeightedDiagonalBuilder;
impl OperatorBuilder for WeightedDiagonalBuilder {
    fn kind(&self) -> &'static str {
        "weighted_diagonal"
    }
    fn summary(&self) -> &'static str {
        "scalar form Σ_k w_k x_{1,k} ⋯ x_{m,k} on the ℓ_1-model"
    }
    fn build(&self, spec: &Value, _: &OperatorRegistry, _: &Context) -> Result<RegOperator> {
        let w: EvConstSeq = parse(field(spec, "weights")?, "weights")?;
        Ok(RegOperator::new(WeightedDiagonal::new(arity(spec)?, w)?))
    }
}

struct HomCompositeBuilder;
impl OperatorBuilder for HomCompositeBuilder {
    fn kind(&self) -> &'static str {
        "hom_composite"
    }
    fn summary(&self) -> &'static str {
        "lattice map after an inner operator, u ∘ A"
    }
    fn build(&self, spec: &Value, reg: &OperatorRegistry, ctx: &Context) -> Result<RegOperator> {
        let u: LatticeMap = parse(field(spec, "u")?, "u")?;
        let inner = reg.resolve(field(spec, "inner")?, ctx)?;
        Ok(RegOperator::new(HomComposite::new(u, inner)?))
    }
}

struct CombinationBuilder;
impl OperatorBuilder for CombinationBuilder {
    fn kind(&self) -> &'static str {
        "combination"
    }
    fn summary(&self) -> &'static str {
        "rational linear combination Σ λ_i A_i"
    }
    fn build(&self, spec: &Value, reg: &OperatorRegistry, ctx: &Context) -> Result<RegOperator> {
        let terms = field(spec, "terms")?
            .as_array()
            .ok_or_else(|| Error::Parse("`terms` must be a list".into()))?
            .iter()
            .map(|t| {
                let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                    Error::Parse("each term is [coefficient, operator]".into())
                })?;
                let (n, d): (i128, i128) = parse(&pair[0], "coefficient")?;
                let c: Rational = rational::from_pair(n, d).map_err(Error::Parse)?;
                Ok((c, reg.resolve(&pair[1], ctx)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let (domain, codomain) = match (spec.get("domain"), spec.get("codomain"), terms.first()) {
            (Some(d), Some(c), _) => (
                d.as_array()
                    .ok_or_else(|| Error::Parse("`domain` must be a list".into()))?
                    .iter()
                    .map(|s| ctx.space(s))
                    .collect::<Result<Vec<_>>>()?,
                ctx.space(c)?,
            ),
            (_, _, Some((_, a))) => (a.domain().to_vec(), a.codomain().clone()),
            _ => return Err(Error::Parse("empty combination needs `domain` and `codomain`".into())),
        };
        Ok(RegOperator::new(Combination::new(domain, codomain, terms)?))
    }
}

/// Builders keyed by the `kind` field of an operator spec.
pub struct OperatorRegistry {
    builders: BTreeMap<&'static str, Box<dyn OperatorBuilder>>,
}

impl Default for OperatorRegistry {
    fn default() -> Self {
        let mut r = OperatorRegistry { builders: BTreeMap::new() };
        r.register(Box::new(TensorBuilder));
        r.register(Box::new(CoordProductBuilder));
        r.register(Box::new(UpperTriangularBuilder));
        r.register(Box::new(FiniteRankBuilder));
        r.register(Box::new(WeightedDiagonalBuilder));
        r.register(Box::new(HomCompositeBuilder));
        r.register(Box::new(CombinationBuilder));
        r
    }
}

impl OperatorRegistry {
    pub fn register(&mut self, b: Box<dyn OperatorBuilder>) {
        self.builders.insert(b.kind(), b);
    }

    pub fn kinds(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.builders.values().map(|b| (b.kind(), b.summary()))
    }

    pub fn build(&self, spec: &Value, ctx: &Context) -> Result<RegOperator> {
        let kind = field(spec, "kind")?
            .as_str()
            .ok_or_else(|| Error::Parse("`kind` must be a string".into()))?;
        let b = self
            .builders
            .get(kind)
            .ok_or_else(|| Error::Parse(format!("unknown operator kind `{kind}`")))?;
        b.build(spec, self, ctx)
    }

    /// An inline spec or the name of an operator already in `ctx`.
    pub fn resolve(&self, v: &Value, ctx: &Context) -> Result<RegOperator> {
        match v {
            Value::String(name) => ctx
                .operators
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("unknown operator `{name}`"))),
            other => self.build(other, ctx),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn builds_every_kind_and_round_trips() {
        let reg = OperatorRegistry::default();
        let mut ctx = Context::default();
        let specs = [
            json!({"kind": "tensor", "dims": [2, 2], "codomain": 1, "entries": [[2, 1, 1, 3, 1]]}),
            json!({"kind": "coord_product", "space": {"kind": "seq_c"}, "arity": 2}),
            json!({"kind": "upper_triangular", "space": {"kind": "seq_l1"}}),
            json!({"kind": "finite_rank", "domain": [{"kind": "fin_dim", "n": 2}],
                   "phi": [{"vec": [[1, 1], [0, 1]]}], "v": {"vec": [[2, 1]]}, "codomain": {"kind": "fin_dim", "n": 1}}),
            json!({"kind": "weighted_diagonal", "arity": 3, "weights": {"prefix": [[1, 1]], "tail": [0, 1]}}),
        ];
        for s in &specs {
            let a = reg.build(s, &ctx).unwrap();
            let b = reg.build(&a.to_json(), &ctx).unwrap();
            assert_eq!(a.to_json(), b.to_json());
        }
        ctx.operators.insert("cp".into(), reg.build(&json!({"kind": "coord_product", "space": {"kind": "fin_dim", "n": 2}, "arity": 2}), &ctx).unwrap());
        let h = reg
            .build(&json!({"kind": "hom_composite", "u": {"matrix": {"entries": [[[1, 1], [0, 1]]]}}, "inner": "cp"}), &ctx)
            .unwrap();
        assert_eq!(h.codomain(), &Space::FinDim(1));
        let c = reg.build(&json!({"kind": "combination", "terms": [[[1, 2], "cp"], [[-1, 1], "cp"]]}), &ctx).unwrap();
        assert_eq!(reg.build(&c.to_json(), &ctx).unwrap().to_json(), c.to_json());
        assert!(matches!(reg.build(&json!({"kind": "nope"}), &ctx), Err(Error::Parse(_))));
        assert!(matches!(reg.build(&json!({"kind": "hom_composite", "u": {"matrix": {"entries": [[[1, 1]]]}}, "inner": "zz"}), &ctx), Err(Error::Parse(_))));
    }
}
