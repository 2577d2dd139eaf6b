//! Reduction of a finite-rank operator to its range sublattice `G ≅ R^n`.

use num_traits::Zero;

use super::catalog::atom;
use super::compose::{compose_hom, LatticeMap};
use super::form::Idx;
use super::repr::RegOperator;
use super::tensor::index_tuples;
use crate::error::{mismatch, Error, Result};
use crate::lattice::{Model, Primal, Riesz, Space, VecElem};
use crate::linalg::{rank, Matrix};

pub const CLOSURE_ROUNDS: usize = 32;

/// `G` with its atoms, the isomorphism `I: G → R^n`, its inverse, and the
/// astriction `A_1 = I ∘ A`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub atoms: Vec<VecElem>,
    /// Rows of `I`, acting on the ambient `R^k`. `None` when `G = {0}`.
    pub iso: Option<Matrix>,
    /// Columns are the atoms.
    pub inverse: Option<Matrix>,
    pub astriction: Option<RegOperator>,
    pub rounds: usize,
}

impl Reduction {
    pub fn dim(&self) -> usize {
        self.atoms.len()
    }

    /// `I(g)` for `g ∈ G`.
    pub fn to_coords(&self, g: &VecElem) -> Result<VecElem> {
        match &self.iso {
            Some(t) => t.apply(g),
            None => Ok(VecElem::zeros(0)),
        }
    }

    pub fn from_coords(&self, c: &VecElem) -> Result<VecElem> {
        match &self.inverse {
            Some(w) => w.apply(c),
            None => Err(mismatch("the trivial sublattice has no coordinates")),
        }
    }

    /// Membership in `G`: `g` is a combination of the atoms.
    pub fn contains(&self, g: &VecElem) -> bool {
        if g.is_zero() {
            return true;
        }
        match (&self.iso, &self.inverse) {
            (Some(t), Some(w)) => t.apply(g).and_then(|c| w.apply(&c)).map(|h| &h == g).unwrap_or(false),
            _ => false,
        }
    }
}

/// Basis inputs of a slot whose values span the range.
fn range_inputs(space: &Space, threshold: usize) -> Vec<Primal> {
    match space.model() {
        Model::Fin(n) => (1..=n).map(|i| atom(space, Idx::At(i), 0)).collect(),
        Model::L1 => (1..=threshold + 1).map(|i| atom(space, Idx::At(i), 0)).collect(),
        Model::C => {
            let mut v: Vec<Primal> = (1..=threshold + 1).map(|i| atom(space, Idx::At(i), 0)).collect();
            v.push(atom(space, Idx::Limit, 0));
            v
        }
    }
}

fn proportional(u: &VecElem, v: &VecElem) -> bool {
    rank(&[u.clone(), v.clone()]) == 1
}

fn normalized(v: &VecElem) -> VecElem {
    v.scale(&v.sup_norm().recip())
}

fn push_piece(pieces: &mut Vec<VecElem>, v: VecElem) {
    if v.is_zero() || pieces.iter().any(|p| proportional(p, &v)) {
        return;
    }
    pieces.push(normalized(&v));
}

/// Disjoint positive pieces spanning the sublattice generated by `gens`.
fn disjointify(gens: &[VecElem]) -> Result<(Vec<VecElem>, usize)> {
    let mut pieces = Vec::new();
    for g in gens {
        push_piece(&mut pieces, g.pos_part());
        push_piece(&mut pieces, g.neg_part());
    }
    for round in 0..=CLOSURE_ROUNDS {
        let overlapping = (0..pieces.len())
            .flat_map(|i| (i + 1..pieces.len()).map(move |j| (i, j)))
            .any(|(i, j)| !pieces[i].is_disjoint(&pieces[j]));
        if !overlapping {
            if rank(&pieces) != pieces.len() {
                return Err(Error::InvariantViolation("disjoint pieces are linearly dependent".into()));
            }
            return Ok((pieces, round));
        }
        if round == CLOSURE_ROUNDS {
            break;
        }
        let mut used = vec![false; pieces.len()];
        let mut next = Vec::new();
        for i in 0..pieces.len() {
            if used[i] {
                continue;
            }
            let partner = (i + 1..pieces.len()).find(|&j| !used[j] && !pieces[i].is_disjoint(&pieces[j]));
            match partner {
                Some(j) => {
                    used[j] = true;
                    let (u, v) = (&pieces[i], &pieces[j]);
                    push_piece(&mut next, u.sub(v).pos_part());
                    push_piece(&mut next, v.sub(u).pos_part());
                    push_piece(&mut next, u.inf(v));
                }
                None => push_piece(&mut next, pieces[i].clone()),
            }
            used[i] = true;
        }
        pieces = next;
    }
    Err(Error::ClosureBudgetExceeded { rounds: CLOSURE_ROUNDS })
}

fn first_index(v: &VecElem) -> usize {
    v.support()[0]
}

/// Sublattice generated by the range of `A`, with atoms normalized to unit
/// sup-norm and ordered by their first coordinate.
pub fn finite_rank_reduce(a: &RegOperator) -> Result<Reduction> {
    let k = a
        .codomain()
        .fin_dim()
        .ok_or_else(|| mismatch("finite-rank reduction needs a finite-dimensional codomain"))?;
    let inputs: Vec<Vec<Primal>> = a.domain().iter().map(|s| range_inputs(s, a.threshold())).collect();
    let dims: Vec<usize> = inputs.iter().map(Vec::len).collect();
    let mut range = Vec::new();
    for idx in index_tuples(&dims) {
        let args: Vec<Primal> = idx.iter().zip(&inputs).map(|(&i, b)| b[i - 1].clone()).collect();
        match a.evaluate(&args)? {
            Primal::Vec(v) if !v.is_zero() => range.push(v),
            Primal::Vec(_) => {}
            _ => return Err(Error::InvariantViolation("finite codomain produced a sequence".into())),
        }
    }
    let (mut atoms, rounds) = disjointify(&range)?;
    atoms.sort_by_key(first_index);
    if atoms.is_empty() {
        return Ok(Reduction {
            atoms,
            iso: None,
            inverse: None,
            astriction: None,
            rounds,
        });
    }
    let n = atoms.len();
    let mut t = Matrix::zeros(n, k);
    let mut w = Matrix::zeros(k, n);
    for (c, at) in atoms.iter().enumerate() {
        let i = first_index(at);
        t.set(c + 1, i, at.get(i).recip());
        for j in at.support() {
            w.set(j, c + 1, at.get(j));
        }
    }
    let u = LatticeMap::matrix_between(t.clone(), a.codomain().clone(), Space::FinDim(n))?;
    let astriction = compose_hom(u, a)?;
    for g in &range {
        if &w.apply(&t.apply(g)?)? != g {
            return Err(Error::InvariantViolation("range element outside the computed sublattice".into()));
        }
    }
    debug_assert!(atoms.iter().all(|a| !a.sup_norm().is_zero()));
    Ok(Reduction {
        atoms,
        iso: Some(t),
        inverse: Some(w),
        astriction: Some(astriction),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::tensor::TensorOp;
    use crate::rational::{int, rat};

    fn op(dims: Vec<usize>, k: usize, entries: Vec<(Vec<usize>, usize, i64)>) -> RegOperator {
        let e: Vec<_> = entries.into_iter().map(|(i, j, v)| (i, j, int(v))).collect();
        RegOperator::new(TensorOp::from_entries(dims, Space::FinDim(k), e).unwrap())
    }

    #[test]
    fn proportional_outputs_give_one_atom() {
        let a = op(vec![1, 1], 2, vec![(vec![1, 1], 1, 1), (vec![1, 1], 2, 2)]);
        let r = finite_rank_reduce(&a).unwrap();
        assert_eq!(r.atoms, vec![VecElem::new(vec![rat(1, 2), int(1)])]);
        let x = Primal::Vec(VecElem::from_ints(&[3]));
        let a1 = r.astriction.as_ref().unwrap();
        let Primal::Vec(c) = a1.evaluate(&[x.clone(), x.clone()]).unwrap() else { panic!() };
        assert_eq!(Primal::Vec(r.from_coords(&c).unwrap()), a.evaluate(&[x.clone(), x]).unwrap());
    }

    #[test]
    fn zero_operator_has_trivial_range() {
        let r = finite_rank_reduce(&op(vec![2], 1, vec![])).unwrap();
        assert_eq!(r.dim(), 0);
        assert!(r.contains(&VecElem::zeros(1)));
    }

    #[test]
    fn mixed_outputs_split_into_units() {
        let a = op(vec![2], 2, vec![(vec![1], 1, 1), (vec![1], 2, 2), (vec![2], 1, 2), (vec![2], 2, 1)]);
        let r = finite_rank_reduce(&a).unwrap();
        assert_eq!(r.atoms, vec![VecElem::from_ints(&[1, 0]), VecElem::from_ints(&[0, 1])]);
    }
}
