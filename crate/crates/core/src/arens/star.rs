//! The iterated-adjoint chain `A*, A**, …, A^{*(m+1)}`, built from its
//! defining equations by probing lower stages with primal test vectors.

use num_traits::Zero;

use super::extend::{check_bidual_args, Extension};
use crate::bidual::{Bidual, CDualElem};
use crate::error::{Error, Result};
use crate::lattice::{pairing, Dual, EvConstSeq, FinSupSeq, Model, Primal, Space, VecElem};
use crate::operator::RegOperator;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct StarChain {
    base: RegOperator,
}

pub fn star_chain(a: &RegOperator) -> StarChain {
    StarChain { base: a.clone() }
}

/// Dual-model element of `space` read off a linear functional `v` on it.
/// Indices past `bound` must be inert for `v`; the extra probes check it.
fn probe(space: &Space, bound: usize, v: &dyn Fn(&Primal) -> Result<Rational>) -> Result<Dual> {
    match space.model() {
        Model::Fin(n) => Ok(Dual::Vec(VecElem::new(
            (1..=n).map(|i| v(&Primal::Vec(VecElem::unit(n, i)))).collect::<Result<_>>()?,
        ))),
        Model::L1 => {
            let at = |k: usize| v(&Primal::Finsup(FinSupSeq::unit(k)));
            let prefix = (1..=bound).map(at).collect::<Result<Vec<_>>>()?;
            let tail = at(bound + 1)?;
            if at(bound + 2)? != tail {
                return Err(Error::NotRepresentable(format!("adjoint stage is not eventually constant past {bound}")));
            }
            Ok(Dual::Evconst(EvConstSeq::new(prefix, tail)))
        }
        Model::C => {
            let at = |k: usize| v(&Primal::Evconst(EvConstSeq::unit(k)));
            let a = FinSupSeq::from_pairs((1..=bound).map(|k| Ok((k, at(k)?))).collect::<Result<Vec<_>>>()?);
            if !at(bound + 1)?.is_zero() {
                return Err(Error::NotRepresentable(format!("adjoint stage has ℓ_1 mass past {bound}")));
            }
            let total = v(&Primal::Evconst(EvConstSeq::constant(crate::rational::one())))?;
            Ok(Dual::CDual(CDualElem::new(total - a.sum(), a)))
        }
    }
}

impl StarChain {
    /// `A^{*(k)}` evaluated with its primal arguments `x_1..x_{m-k}`, as a
    /// dual-model element of slot `m-k+1`. Uses `x''_{m-k+2}..x''_m`.
    fn stage(&self, k: usize, args: &[Bidual], y: &Dual, primal: &[Primal], bound: usize) -> Result<Dual> {
        let m = self.base.arity();
        let slot = m - k + 1;
        let space = &self.base.domain()[slot - 1];
        let lower = |x: &Primal| -> Result<Rational> {
            let mut p = primal.to_vec();
            p.push(x.clone());
            if k == 1 {
                pairing(y, &self.base.evaluate(&p)?)
            } else {
                let d = self.stage(k - 1, args, y, &p, bound)?;
                args[slot].apply(&d)
            }
        };
        let local = bound.max(primal.iter().map(Primal::index_extent).max().unwrap_or(0));
        probe(space, local, &lower)
    }
}

impl Extension for StarChain {
    fn base(&self) -> &RegOperator {
        &self.base
    }

    /// `A^{*(m+1)}(x''_1..x''_m)(y') = x''_1(A^{*(m)}(x''_2..x''_m, y'))`.
    fn value(&self, args: &[Bidual], y: &Dual) -> Result<Rational> {
        check_bidual_args(&self.base, args)?;
        let bound = self
            .base
            .threshold()
            .max(y.index_extent())
            .max(args.iter().map(Bidual::index_extent).max().unwrap_or(0))
            + 1;
        let m = self.base.arity();
        let d = self.stage(m, args, y, &[], bound)?;
        args[0].apply(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arens::extend::arens_extend;
    use crate::bidual::embed_j;
    use crate::operator::{Permutation, TensorOp, UpperTriangular};
    use crate::rational::int;

    #[test]
    fn chain_matches_theta_on_irregular_form() {
        let b = RegOperator::new(UpperTriangular::new(Space::SeqL1).unwrap());
        let l = Bidual::limit_l1();
        let y = Dual::Vec(VecElem::from_ints(&[1]));
        assert_eq!(star_chain(&b).value(&[l.clone(), l], &y).unwrap(), int(1));
    }

    #[test]
    fn finite_tensor_chain_is_the_operator() {
        let t = TensorOp::scalar_form(&[2, 2, 2], &[(&[1, 2, 1], 3), (&[2, 2, 2], -1)]);
        let a = RegOperator::new(t);
        let xs: Vec<Primal> = [[1, -2], [3, 1], [2, 5]].iter().map(|v| Primal::Vec(VecElem::from_ints(v))).collect();
        let js: Vec<Bidual> = xs.iter().map(embed_j).collect();
        let y = Dual::Vec(VecElem::from_ints(&[1]));
        let want = pairing(&y, &a.evaluate(&xs).unwrap()).unwrap();
        assert_eq!(star_chain(&a).value(&js, &y).unwrap(), want);
        let th = arens_extend(&a, &Permutation::theta(3)).unwrap();
        assert_eq!(th.value(&js, &y).unwrap(), want);
    }
}
