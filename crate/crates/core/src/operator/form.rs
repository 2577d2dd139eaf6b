//! Scalar multilinear forms given by lazy coefficient functions.
//!
//! A form on slots `E_1 × … × E_r` is described by `c(i_1, …, i_r)`, where
//! each index is a coordinate `At(k)` or, in a c-model slot, `Limit` (paired
//! with `tail(x)`). Every form carries a threshold `K`: in ℓ_1-model slots,
//! coefficients at indices beyond `K` depend only on the relative order and
//! equality of those indices, and c-model coefficients vanish at finite
//! indices beyond `K`. This is what keeps slices and bar-lifts finite.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bidual::{Bidual, CDualElem};
use crate::error::{mismatch, Error, Result};
use crate::lattice::{Dual, EvConstSeq, FinSupSeq, Model, Primal, VecElem};
use crate::rational::{self, Rational};

/// Slot index; serializes as the coordinate number or `"limit"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Idx {
    At(usize),
    Limit,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IdxWire {
    At(usize),
    Named(String),
}

impl Serialize for Idx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Idx::At(k) => IdxWire::At(*k),
            Idx::Limit => IdxWire::Named("limit".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Idx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Idx, D::Error> {
        use serde::de::Error as _;
        match IdxWire::deserialize(d)? {
            IdxWire::At(0) => Err(D::Error::custom("indices are 1-based")),
            IdxWire::At(k) => Ok(Idx::At(k)),
            IdxWire::Named(s) if s == "limit" => Ok(Idx::Limit),
            IdxWire::Named(s) => Err(D::Error::custom(format!("unknown index {s:?}"))),
        }
    }
}

impl Idx {
    pub fn finite(self) -> Option<usize> {
        match self {
            Idx::At(k) => Some(k),
            Idx::Limit => None,
        }
    }
}

impl fmt::Display for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Idx::At(k) => write!(f, "{k}"),
            Idx::Limit => write!(f, "lim"),
        }
    }
}

/// A slot of a form: its position in the original operator and its model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormSlot {
    pub origin: usize,
    pub model: Model,
}

type CoeffFn = dyn Fn(&[Idx]) -> Rational + Send + Sync;

#[derive(Clone)]
pub struct Form {
    slots: Vec<FormSlot>,
    threshold: usize,
    coeff: Arc<CoeffFn>,
    memo: Arc<DashMap<Vec<Idx>, Rational>>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form")
            .field("slots", &self.slots)
            .field("threshold", &self.threshold)
            .finish_non_exhaustive()
    }
}

/// Largest finite index among sequence-model slots.
fn seq_extent(slots: &[FormSlot], idx: &[Idx]) -> usize {
    slots
        .iter()
        .zip(idx)
        .filter(|(s, _)| !matches!(s.model, Model::Fin(_)))
        .filter_map(|(_, i)| i.finite())
        .max()
        .unwrap_or(0)
}

fn with_inserted(rest: &[Idx], pos: usize, i: Idx) -> Vec<Idx> {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.extend_from_slice(&rest[..pos]);
    v.push(i);
    v.extend_from_slice(&rest[pos..]);
    v
}

/// Nonzero `(index, weight)` terms of a primal argument in a slot.
fn primal_terms(model: Model, x: &Primal, threshold: usize) -> Result<Vec<(Idx, Rational)>> {
    match (model, x) {
        (Model::Fin(n), Primal::Vec(v)) if v.len() == n => Ok(v
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Idx::At(i + 1), c.clone()))
            .collect()),
        (Model::L1, Primal::Finsup(s)) => Ok(s.iter().map(|(i, c)| (Idx::At(i), c.clone())).collect()),
        (Model::C, Primal::Evconst(s)) => {
            let mut out: Vec<(Idx, Rational)> = (1..=threshold)
                .map(|k| (Idx::At(k), s.get(k)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !s.tail().is_zero() {
                out.push((Idx::Limit, s.tail().clone()));
            }
            Ok(out)
        }
        _ => Err(mismatch(format!("argument does not fit a {model:?} slot"))),
    }
}

impl Form {
    pub fn new(
        models: Vec<Model>,
        threshold: usize,
        coeff: impl Fn(&[Idx]) -> Rational + Send + Sync + 'static,
    ) -> Form {
        let slots = models
            .into_iter()
            .enumerate()
            .map(|(i, model)| FormSlot { origin: i + 1, model })
            .collect();
        Form {
            slots,
            threshold,
            coeff: Arc::new(coeff),
            memo: Arc::new(DashMap::new()),
        }
    }

    pub fn zero(models: Vec<Model>) -> Form {
        Form::new(models, 0, |_| rational::zero())
    }

    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[FormSlot] {
        &self.slots
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    /// Position of the slot that came from operator slot `origin`.
    pub fn position_of(&self, origin: usize) -> Option<usize> {
        self.slots.iter().position(|s| s.origin == origin)
    }

    pub fn coeff(&self, idx: &[Idx]) -> Rational {
        if let Some(v) = self.memo.get(idx) {
            return v.clone();
        }
        let v = (self.coeff)(idx);
        self.memo.insert(idx.to_vec(), v.clone());
        v
    }

    /// `Σ λ_i F_i` over forms with identical slots.
    pub fn linear_combination(models: Vec<Model>, terms: Vec<(Rational, Form)>) -> Result<Form> {
        for (_, f) in &terms {
            if f.slots.iter().map(|s| s.model).ne(models.iter().copied()) {
                return Err(mismatch("combined forms have different slots"));
            }
        }
        let threshold = terms.iter().map(|(_, f)| f.threshold).max().unwrap_or(0);
        Ok(Form::new(models, threshold, move |idx| {
            terms.iter().map(|(l, f)| l * f.coeff(idx)).sum()
        }))
    }

    /// Value at a tuple of primal arguments.
    pub fn evaluate(&self, args: &[Primal]) -> Result<Rational> {
        if args.len() != self.arity() {
            return Err(mismatch(format!(
                "form of arity {} applied to {} arguments",
                self.arity(),
                args.len()
            )));
        }
        let terms = self
            .slots
            .iter()
            .zip(args)
            .map(|(s, x)| primal_terms(s.model, x, self.threshold))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.sum_over(&terms, &mut Vec::new(), None))
    }

    /// `Σ Π w · c(idx)` over the product of term lists; `open` inserts a
    /// fixed index at a position.
    fn sum_over(&self, terms: &[Vec<(Idx, Rational)>], acc: &mut Vec<Idx>, open: Option<(usize, Idx)>) -> Rational {
        let depth = acc.len();
        if depth == terms.len() {
            return match open {
                None => self.coeff(acc),
                Some((pos, i)) => self.coeff(&with_inserted(acc, pos, i)),
            };
        }
        let mut total = rational::zero();
        for (i, w) in &terms[depth] {
            acc.push(*i);
            let v = self.sum_over(terms, acc, open);
            acc.pop();
            if !v.is_zero() {
                total += w * v;
            }
        }
        total
    }

    /// The functional obtained by fixing every argument but the one at
    /// position `open`.
    pub fn slice(&self, fixed: &[Option<Primal>]) -> Result<Dual> {
        if fixed.len() != self.arity() || fixed.iter().filter(|x| x.is_none()).count() != 1 {
            return Err(mismatch("slice needs exactly one open slot"));
        }
        let pos = fixed.iter().position(Option::is_none).expect("one open slot");
        let mut terms = Vec::with_capacity(self.arity() - 1);
        for (i, (s, x)) in self.slots.iter().zip(fixed).enumerate() {
            if i != pos {
                let x = x.as_ref().expect("fixed slot");
                terms.push(primal_terms(s.model, x, self.threshold)?);
            }
        }
        let value = |i: Idx| self.sum_over(&terms, &mut Vec::new(), Some((pos, i)));
        Ok(match self.slots[pos].model {
            Model::Fin(n) => Dual::Vec(VecElem::new((1..=n).map(|i| value(Idx::At(i))).collect())),
            Model::L1 => {
                let others = self
                    .slots
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != pos)
                    .map(|(_, s)| s)
                    .zip(terms_extent(&terms))
                    .filter(|(s, _)| !matches!(s.model, Model::Fin(_)))
                    .map(|(_, e)| e)
                    .max()
                    .unwrap_or(0);
                let bound = self.threshold.max(others);
                Dual::Evconst(EvConstSeq::from_fn(bound, value(Idx::At(bound + 1)), |k| {
                    value(Idx::At(k))
                }))
            }
            Model::C => {
                let a = FinSupSeq::from_pairs((1..=self.threshold).map(|k| (k, value(Idx::At(k)))));
                Dual::CDual(CDualElem::new(value(Idx::Limit), a))
            }
        })
    }

    /// Bar-lift: evaluate the bidual element `x` on the slice at position
    /// `pos`, leaving a form on the remaining slots.
    pub fn bar_lift(&self, pos: usize, x: &Bidual) -> Result<Form> {
        let slot = *self
            .slots
            .get(pos)
            .ok_or_else(|| mismatch(format!("no slot at position {pos}")))?;
        if !slot_accepts(slot.model, x) {
            return Err(mismatch(format!(
                "bidual element does not fit slot {} ({:?})",
                slot.origin, slot.model
            )));
        }
        let mut slots = self.slots.clone();
        slots.remove(pos);
        let parent = self.clone();
        let (threshold, coeff): (usize, Box<CoeffFn>) = match x.clone() {
            Bidual::Vec(v) => (
                self.threshold,
                Box::new(move |rest: &[Idx]| {
                    let mut s = rational::zero();
                    for (i, xi) in v.coords().iter().enumerate() {
                        if !xi.is_zero() {
                            s += xi * parent.coeff(&with_inserted(rest, pos, Idx::At(i + 1)));
                        }
                    }
                    s
                }),
            ),
            Bidual::L1Bidual(e) => {
                let threshold = self.threshold.max(e.a.max_index());
                let rest_slots = slots.clone();
                (
                    threshold,
                    Box::new(move |rest: &[Idx]| {
                        let mut s = rational::zero();
                        for (k, ak) in e.a.iter() {
                            s += ak * parent.coeff(&with_inserted(rest, pos, Idx::At(k)));
                        }
                        if !e.mu.is_zero() {
                            let far = threshold.max(seq_extent(&rest_slots, rest)) + 1;
                            s += &e.mu * parent.coeff(&with_inserted(rest, pos, Idx::At(far)));
                        }
                        s
                    }),
                )
            }
            Bidual::CBidual(e) => {
                let k_max = self.threshold;
                (
                    self.threshold,
                    Box::new(move |rest: &[Idx]| {
                        let mut s = rational::zero();
                        if !e.beta.is_zero() {
                            s += &e.beta * parent.coeff(&with_inserted(rest, pos, Idx::Limit));
                        }
                        for k in 1..=k_max {
                            let tk = e.t.get(k);
                            if !tk.is_zero() {
                                s += tk * parent.coeff(&with_inserted(rest, pos, Idx::At(k)));
                            }
                        }
                        s
                    }),
                )
            }
        };
        Ok(Form {
            slots,
            threshold,
            coeff: Arc::from(coeff),
            memo: Arc::new(DashMap::new()),
        })
    }

    /// Value of a form with no remaining slots.
    pub fn scalar(&self) -> Result<Rational> {
        if self.arity() != 0 {
            return Err(Error::InvariantViolation(format!(
                "form still has {} open slots",
                self.arity()
            )));
        }
        Ok(self.coeff(&[]))
    }
}

fn terms_extent(terms: &[Vec<(Idx, Rational)>]) -> Vec<usize> {
    terms
        .iter()
        .map(|t| t.iter().filter_map(|(i, _)| i.finite()).max().unwrap_or(0))
        .collect()
}

fn slot_accepts(model: Model, x: &Bidual) -> bool {
    match (model, x) {
        (Model::Fin(n), Bidual::Vec(v)) => v.len() == n,
        (Model::L1, Bidual::L1Bidual(_)) | (Model::C, Bidual::CBidual(_)) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidual::{embed_j, L1BidualElem};
    use crate::rational::int;

    fn upper_triangular() -> Form {
        Form::new(vec![Model::L1, Model::L1], 0, |idx| match idx {
            [Idx::At(i), Idx::At(j)] => int((i <= j) as i64),
            _ => int(0),
        })
    }

    #[test]
    fn slices_of_upper_triangular() {
        let b = upper_triangular();
        let e2 = Primal::Finsup(FinSupSeq::unit(2));
        assert_eq!(
            b.slice(&[Some(e2.clone()), None]).unwrap(),
            Dual::Evconst(EvConstSeq::new(vec![int(0)], int(1)))
        );
        assert_eq!(
            b.slice(&[None, Some(e2)]).unwrap(),
            Dual::Evconst(EvConstSeq::new(vec![int(1), int(1)], int(0)))
        );
    }

    #[test]
    fn limit_lifts() {
        let b = upper_triangular();
        let l = Bidual::limit_l1();
        let first = b.bar_lift(0, &l).unwrap();
        for j in 1..8 {
            assert_eq!(first.coeff(&[Idx::At(j)]), int(0));
        }
        let second = b.bar_lift(1, &l).unwrap();
        for i in 1..8 {
            assert_eq!(second.coeff(&[Idx::At(i)]), int(1));
        }
        assert_eq!(first.bar_lift(0, &l).unwrap().scalar().unwrap(), int(0));
        assert_eq!(second.bar_lift(0, &l).unwrap().scalar().unwrap(), int(1));
    }

    #[test]
    fn j_lift_is_partial_application() {
        let b = upper_triangular();
        let x = Primal::Finsup(FinSupSeq::from_pairs([(1, int(2)), (3, int(-1))]));
        let y = Primal::Finsup(FinSupSeq::from_pairs([(2, int(5)), (3, int(1))]));
        let direct = b.evaluate(&[x.clone(), y.clone()]).unwrap();
        let lifted = b.bar_lift(0, &embed_j(&x)).unwrap().bar_lift(0, &embed_j(&y)).unwrap();
        assert_eq!(lifted.scalar().unwrap(), direct);
        assert_eq!(direct, int(2 * 5 + 2 - 1));
    }

    #[test]
    fn lift_order_matters_for_three_slots() {
        // c(i, j, k) = [i ≤ j]: lifting slots (3, 1, 2) and (3, 2, 1) with L
        // everywhere differ, so the backward shift and the reversal are
        // genuinely different extensions once m ≥ 3.
        let f = Form::new(vec![Model::L1; 3], 0, |idx| match idx {
            [Idx::At(i), Idx::At(j), _] => int((i <= j) as i64),
            _ => int(0),
        });
        let l = Bidual::L1Bidual(L1BidualElem::limit());
        let slot3 = f.bar_lift(2, &l).unwrap();
        let shift = slot3.bar_lift(0, &l).unwrap().bar_lift(0, &l).unwrap();
        let rev = slot3.bar_lift(1, &l).unwrap().bar_lift(0, &l).unwrap();
        assert_eq!(shift.scalar().unwrap(), int(0));
        assert_eq!(rev.scalar().unwrap(), int(1));
    }
}
