use std::sync::Arc;

use dashmap::DashMap;
use num_traits::Zero;

use crate::bidual::{Bidual, CBidualElem, CDualElem, L1BidualElem};
use crate::error::{mismatch, Error, Result};
use crate::lattice::{Dual, EvConstSeq, FinSupSeq, Model, Space, VecElem};
use crate::operator::{Form, Permutation, RegOperator};
use crate::rational::{self, Rational};

/// Lift `x''` through slot `ρ(k)` of `form`, whose slots remember their
/// position in the original operator.
pub fn bar_lift(form: &Form, x: &Bidual, rho: &Permutation, k: usize) -> Result<Form> {
    let origin = rho.apply(k);
    let pos = form
        .position_of(origin)
        .ok_or_else(|| mismatch(format!("slot {origin} is not open")))?;
    form.bar_lift(pos, x)
}

/// A way of evaluating an extension `Ã(x''_1..x''_m)(y')`.
pub trait Extension: Send + Sync {
    fn base(&self) -> &RegOperator;
    fn value(&self, args: &[Bidual], y: &Dual) -> Result<Rational>;

    /// The codomain bidual element `Ã(x''_1..x''_m)`.
    fn eval(&self, args: &[Bidual]) -> Result<Bidual> {
        let a = self.base();
        let bound = a.threshold().max(args.iter().map(Bidual::index_extent).max().unwrap_or(0)) + 1;
        reconstruct(a.codomain(), bound, |y| self.value(args, y))
    }
}

pub(crate) fn check_bidual_args(a: &RegOperator, args: &[Bidual]) -> Result<()> {
    if args.len() != a.arity() {
        return Err(mismatch(format!("{} expects {} arguments, got {}", a.kind(), a.arity(), args.len())));
    }
    for (k, (x, s)) in args.iter().zip(a.domain()).enumerate() {
        if !x.belongs_to(s) {
            return Err(mismatch(format!("argument {} is not in the bidual of {s}", k + 1)));
        }
    }
    Ok(())
}

/// Rebuild a bidual element of `space` from its values on coordinate
/// functionals. `bound` must exceed every index where the element can carry
/// information; one further probe confirms this.
pub fn reconstruct(space: &Space, bound: usize, f: impl Fn(&Dual) -> Result<Rational>) -> Result<Bidual> {
    let coord = |k: usize| f(&Dual::coordinate(space, k));
    match space.model() {
        Model::Fin(n) => Ok(Bidual::Vec(VecElem::new((1..=n).map(coord).collect::<Result<_>>()?))),
        Model::L1 => {
            let a = FinSupSeq::from_pairs((1..=bound).map(|k| Ok((k, coord(k)?))).collect::<Result<Vec<_>>>()?);
            for k in [bound + 1, bound + 2] {
                if !coord(k)?.is_zero() {
                    return Err(Error::NotRepresentable(format!(
                        "extension value has ℓ_1 mass at index {k} beyond the bound {bound}"
                    )));
                }
            }
            let total = f(&Dual::Evconst(EvConstSeq::constant(rational::one())))?;
            let mu = total - a.sum();
            Ok(Bidual::L1Bidual(L1BidualElem::new(a, mu)))
        }
        Model::C => {
            let beta = f(&Dual::CDual(CDualElem::limit()))?;
            let prefix = (1..=bound).map(coord).collect::<Result<Vec<_>>>()?;
            let tail = coord(bound + 1)?;
            if coord(bound + 2)? != tail {
                return Err(Error::NotRepresentable(format!(
                    "extension value is not eventually constant past index {bound}"
                )));
            }
            Ok(Bidual::CBidual(CBidualElem::new(beta, EvConstSeq::new(prefix, tail))))
        }
    }
}

/// `AR^ρ(A)`: lift `y' ∘ A` through slots `ρ(1), …, ρ(m)` in turn.
#[derive(Clone)]
pub struct ExtendedOp {
    base: RegOperator,
    rho: Permutation,
    forms: Arc<DashMap<String, Form>>,
}

impl std::fmt::Debug for ExtendedOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AR^{}({})", self.rho, self.base.kind())
    }
}

pub fn arens_extend(a: &RegOperator, rho: &Permutation) -> Result<ExtendedOp> {
    if rho.arity() != a.arity() {
        return Err(mismatch(format!(
            "permutation {rho} does not match an operator of arity {}",
            a.arity()
        )));
    }
    Ok(ExtendedOp {
        base: a.clone(),
        rho: rho.clone(),
        forms: Arc::new(DashMap::new()),
    })
}

impl ExtendedOp {
    pub fn rho(&self) -> &Permutation {
        &self.rho
    }

    /// `y' ∘ A`, cached per functional.
    pub fn form(&self, y: &Dual) -> Result<Form> {
        let key = serde_json::to_string(y).expect("duals serialize");
        if let Some(f) = self.forms.get(&key) {
            return Ok(f.clone());
        }
        let f = self.base.compose_dual(y)?;
        self.forms.insert(key, f.clone());
        Ok(f)
    }
}

impl Extension for ExtendedOp {
    fn base(&self) -> &RegOperator {
        &self.base
    }

    fn value(&self, args: &[Bidual], y: &Dual) -> Result<Rational> {
        check_bidual_args(&self.base, args)?;
        let mut form = self.form(y)?;
        for k in 1..=self.rho.arity() {
            form = bar_lift(&form, &args[self.rho.apply(k) - 1], &self.rho, k)?;
        }
        form.scalar()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidual::embed_j;
    use crate::lattice::Primal;
    use crate::operator::{CoordProduct, UpperTriangular};
    use crate::rational::int;

    #[test]
    fn irregular_pair() {
        let b = RegOperator::new(UpperTriangular::new(Space::SeqL1).unwrap());
        let l = Bidual::limit_l1();
        let y = Dual::Vec(VecElem::from_ints(&[1]));
        let id = arens_extend(&b, &Permutation::identity(2)).unwrap();
        let th = arens_extend(&b, &Permutation::theta(2)).unwrap();
        assert_eq!(id.value(&[l.clone(), l.clone()], &y).unwrap(), int(0));
        assert_eq!(th.value(&[l.clone(), l.clone()], &y).unwrap(), int(1));
        assert_eq!(th.eval(&[l.clone(), l]).unwrap(), Bidual::Vec(VecElem::from_ints(&[1])));
    }

    #[test]
    fn c_model_product_is_pointwise() {
        let a = RegOperator::new(CoordProduct::new(Space::SeqC, 2).unwrap());
        let x = Bidual::CBidual(CBidualElem::new(int(3), EvConstSeq::new(vec![int(2)], int(1))));
        let y = Bidual::CBidual(CBidualElem::new(int(-1), EvConstSeq::new(vec![int(5), int(0)], int(4))));
        let want = Bidual::CBidual(CBidualElem::new(int(-3), EvConstSeq::new(vec![int(10), int(0)], int(4))));
        for rho in Permutation::all(2) {
            assert_eq!(arens_extend(&a, &rho).unwrap().eval(&[x.clone(), y.clone()]).unwrap(), want);
        }
    }

    #[test]
    fn extends_on_j_images() {
        let a = RegOperator::new(CoordProduct::new(Space::SeqL1, 2).unwrap());
        let x = Primal::Finsup(FinSupSeq::from_pairs([(2, int(3)), (4, int(1))]));
        let z = Primal::Finsup(FinSupSeq::from_pairs([(2, int(-2))]));
        let ext = arens_extend(&a, &Permutation::theta(2)).unwrap();
        let got = ext.eval(&[embed_j(&x), embed_j(&z)]).unwrap();
        assert_eq!(got, embed_j(&a.evaluate(&[x, z]).unwrap()));
        assert_eq!(ext.eval(&[Bidual::limit_l1(), Bidual::limit_l1()]).unwrap(), embed_j(&Primal::Finsup(FinSupSeq::zero())));
    }
}
