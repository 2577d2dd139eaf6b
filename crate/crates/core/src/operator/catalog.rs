use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::form::{Form, Idx};
use super::repr::{models, OperatorRepr, RegOperator, RuleVerdict};
use crate::error::{mismatch, Error, Result};
use crate::lattice::{pairing, Dual, EvConstSeq, FinSupSeq, Model, Primal, Riesz, Space, VecElem};
use crate::rational::{self, Rational};

/// Coefficient of a dual-model element at a slot index.
pub fn dual_coeff(f: &Dual, i: Idx) -> Rational {
    match (f, i) {
        (Dual::Vec(v), Idx::At(k)) => v.get(k),
        (Dual::Evconst(t), Idx::At(k)) => t.get(k),
        (Dual::CDual(c), Idx::At(k)) => c.a.get(k),
        (Dual::CDual(c), Idx::Limit) => c.b.clone(),
        _ => rational::zero(),
    }
}

/// Nonzero coefficients of a functional on pairwise disjoint positive atoms
/// of its space. A nonzero ℓ_1-model tail contributes two atoms past the
/// prefix, since it charges infinitely many coordinates.
pub fn dual_atoms(f: &Dual) -> Vec<(Idx, Rational)> {
    match f {
        Dual::Vec(v) => v
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Idx::At(i + 1), c.clone()))
            .collect(),
        Dual::Evconst(t) => {
            let mut out: Vec<(Idx, Rational)> = t
                .prefix()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Idx::At(i + 1), c.clone()))
                .collect();
            if !t.tail().is_zero() {
                let p = t.prefix_len();
                out.push((Idx::At(p + 1), t.tail().clone()));
                out.push((Idx::At(p + 2), t.tail().clone()));
            }
            out
        }
        Dual::CDual(c) => {
            let mut out: Vec<(Idx, Rational)> = c.a.iter().map(|(k, v)| (Idx::At(k), v.clone())).collect();
            if !c.b.is_zero() {
                out.push((Idx::Limit, c.b.clone()));
            }
            out
        }
    }
}

/// The positive atom of `space` that [`dual_atoms`] refers to by `i`;
/// `extent` is the largest finite index the functional uses.
pub fn atom(space: &Space, i: Idx, extent: usize) -> Primal {
    match (space.model(), i) {
        (Model::Fin(n), Idx::At(k)) => Primal::Vec(VecElem::unit(n, k)),
        (Model::L1, Idx::At(k)) => Primal::Finsup(FinSupSeq::unit(k)),
        (Model::C, Idx::At(k)) => Primal::Evconst(EvConstSeq::unit(k)),
        (Model::C, Idx::Limit) => Primal::Evconst(EvConstSeq::from_fn(extent, rational::one(), |_| rational::zero())),
        _ => unreachable!("limit atom outside the c-model"),
    }
}

fn sign(x: &Rational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `Some(±1)` for a nonzero single-signed element, `Some(0)` for zero,
/// `None` for mixed signs.
fn primal_sign(x: &Primal) -> Option<i32> {
    if x.is_zero() {
        Some(0)
    } else if x.is_positive() {
        Some(1)
    } else if x.negated().is_positive() {
        Some(-1)
    } else {
        None
    }
}

fn dual_sign(f: &Dual) -> Option<i32> {
    if f.is_zero() {
        Some(0)
    } else if f.is_positive() {
        Some(1)
    } else if f.negated().is_positive() {
        Some(-1)
    } else {
        None
    }
}

fn product(args: &[Primal]) -> Result<Primal> {
    let mut it = args.iter();
    let first = it.next().ok_or_else(|| mismatch("empty product"))?.clone();
    it.try_fold(first, |acc, x| match (acc, x) {
        (Primal::Vec(a), Primal::Vec(b)) => Ok(Primal::Vec(VecElem::new(
            a.coords().iter().zip(b.coords()).map(|(p, q)| p * q).collect(),
        ))),
        (Primal::Finsup(a), Primal::Finsup(b)) => Ok(Primal::Finsup(a.mul(b))),
        (Primal::Evconst(a), Primal::Evconst(b)) => Ok(Primal::Evconst(a.mul(b))),
        _ => Err(mismatch("coordinatewise product across models")),
    })
}

/// `A(x_1, …, x_m) = x_1 · … · x_m` coordinatewise, into the same space.
#[derive(Debug, Clone)]
pub struct CoordProduct {
    domain: Vec<Space>,
    space: Space,
}

impl CoordProduct {
    pub fn new(space: Space, arity: usize) -> Result<CoordProduct> {
        if arity == 0 {
            return Err(mismatch("coordinatewise product needs arity ≥ 1"));
        }
        Ok(CoordProduct {
            domain: vec![space.clone(); arity],
            space,
        })
    }
}

impl OperatorRepr for CoordProduct {
    fn kind(&self) -> &'static str {
        "coord_product"
    }
    fn domain(&self) -> &[Space] {
        &self.domain
    }
    fn codomain(&self) -> &Space {
        &self.space
    }
    fn threshold(&self) -> usize {
        0
    }
    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        product(args)
    }
    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        let y = y.clone();
        let threshold = match &y {
            Dual::Vec(_) => 0,
            Dual::Evconst(t) => t.prefix_len(),
            Dual::CDual(c) => c.a.max_index(),
        };
        Ok(Form::new(models(&self.domain), threshold, move |idx| {
            let first = idx[0];
            if idx.iter().all(|&i| i == first) {
                dual_coeff(&y, first)
            } else {
                rational::zero()
            }
        }))
    }
    fn modulus(&self) -> Result<RegOperator> {
        Ok(RegOperator::new(self.clone()))
    }
    fn positive_rule(&self) -> Option<bool> {
        Some(true)
    }
    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        Some(RuleVerdict::Yes)
    }
    fn to_json(&self) -> Value {
        json!({"kind": "coord_product", "space": self.space, "arity": self.domain.len()})
    }
}

/// `B(x, y) = Σ_{i ≤ j} x_i y_j`, scalar valued.
#[derive(Debug, Clone)]
pub struct UpperTriangular {
    domain: Vec<Space>,
    codomain: Space,
}

impl UpperTriangular {
    pub fn new(space: Space) -> Result<UpperTriangular> {
        if space.is_finite() {
            return Err(mismatch("upper-triangular form lives on a sequence model"));
        }
        Ok(UpperTriangular {
            domain: vec![space.clone(), space],
            codomain: Space::FinDim(1),
        })
    }

    fn on_c(&self) -> bool {
        self.domain[0].model() == Model::C
    }

    fn unrepresentable(&self) -> Error {
        Error::NotRepresentable(
            "upper-triangular form on the c-model: Σ_{i≤j} x_i y_j diverges for nonzero tails".into(),
        )
    }
}

impl OperatorRepr for UpperTriangular {
    fn kind(&self) -> &'static str {
        "upper_triangular"
    }
    fn domain(&self) -> &[Space] {
        &self.domain
    }
    fn codomain(&self) -> &Space {
        &self.codomain
    }
    fn threshold(&self) -> usize {
        0
    }
    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        match (&args[0], &args[1]) {
            (Primal::Finsup(x), Primal::Finsup(y)) => {
                let mut s = rational::zero();
                for (j, yj) in y.iter() {
                    for (i, xi) in x.iter() {
                        if i <= j {
                            s += xi * yj;
                        }
                    }
                }
                Ok(Primal::Vec(VecElem::new(vec![s])))
            }
            (Primal::Evconst(x), Primal::Evconst(y)) if x.tail().is_zero() && y.tail().is_zero() => {
                let xs = FinSupSeq::from_pairs((1..=x.prefix_len()).map(|i| (i, x.get(i))));
                let ys = FinSupSeq::from_pairs((1..=y.prefix_len()).map(|i| (i, y.get(i))));
                self.apply(&[Primal::Finsup(xs), Primal::Finsup(ys)])
            }
            _ => Err(self.unrepresentable()),
        }
    }
    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        if self.on_c() {
            return Err(self.unrepresentable());
        }
        let s = dual_coeff(y, Idx::At(1));
        Ok(Form::new(models(&self.domain), 0, move |idx| match idx {
            [Idx::At(i), Idx::At(j)] if i <= j => s.clone(),
            _ => rational::zero(),
        }))
    }
    fn modulus(&self) -> Result<RegOperator> {
        Ok(RegOperator::new(self.clone()))
    }
    fn positive_rule(&self) -> Option<bool> {
        Some(true)
    }
    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        if self.on_c() {
            return None;
        }
        let x = Primal::Finsup(FinSupSeq::unit(1));
        let y = Primal::Finsup(FinSupSeq::from_pairs([(1, rational::one()), (2, rational::int(-1))]));
        Some(RuleVerdict::No(vec![x, y]))
    }
    fn to_json(&self) -> Value {
        json!({"kind": "upper_triangular", "space": self.domain[0]})
    }
}

/// `A(x_1, …, x_m) = φ_1(x_1) ⋯ φ_m(x_m) · v`.
#[derive(Debug, Clone)]
pub struct FiniteRankProduct {
    domain: Vec<Space>,
    codomain: Space,
    phi: Vec<Dual>,
    v: Primal,
}

impl FiniteRankProduct {
    pub fn new(domain: Vec<Space>, phi: Vec<Dual>, v: Primal, codomain: Space) -> Result<FiniteRankProduct> {
        if domain.is_empty() || domain.len() != phi.len() {
            return Err(mismatch("finite-rank product needs one functional per slot"));
        }
        for (k, (f, s)) in phi.iter().zip(&domain).enumerate() {
            if !f.belongs_to(s) {
                return Err(mismatch(format!("functional {} is not in the dual of {s}", k + 1)));
            }
        }
        if !v.belongs_to(&codomain) {
            return Err(mismatch(format!("range vector is not in {codomain}")));
        }
        Ok(FiniteRankProduct { domain, codomain, phi, v })
    }

    pub fn phi(&self) -> &[Dual] {
        &self.phi
    }

    pub fn v(&self) -> &Primal {
        &self.v
    }

    fn is_zero_op(&self) -> bool {
        self.v.is_zero() || self.phi.iter().any(Dual::is_zero)
    }

    fn with(&self, phi: Vec<Dual>, v: Primal) -> RegOperator {
        RegOperator::new(FiniteRankProduct {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            phi,
            v,
        })
    }

    fn witness(&self) -> Vec<Primal> {
        let atoms: Vec<Vec<(Idx, Rational)>> = self.phi.iter().map(dual_atoms).collect();
        let mut x: Vec<Primal> = atoms
            .iter()
            .zip(&self.domain)
            .zip(&self.phi)
            .map(|((a, s), f)| atom(s, a[0].0, f.index_extent()))
            .collect();
        if let Some(i) = atoms.iter().position(|a| a.len() >= 2) {
            let (s, f) = (&self.domain[i], &self.phi[i]);
            let (p, fp) = atoms[i][0].clone();
            let (q, fq) = atoms[i][1].clone();
            let up = atom(s, p, f.index_extent());
            let uq = atom(s, q, f.index_extent());
            x[i] = if sign(&fp) == sign(&fq) {
                up.scale(&fq.abs()).sub(&uq.scale(&fp.abs()))
            } else {
                up.sub(&uq.scale(&(-(&fp / &fq))))
            };
        }
        x
    }
}

impl OperatorRepr for FiniteRankProduct {
    fn kind(&self) -> &'static str {
        "finite_rank"
    }
    fn domain(&self) -> &[Space] {
        &self.domain
    }
    fn codomain(&self) -> &Space {
        &self.codomain
    }
    fn threshold(&self) -> usize {
        self.phi.iter().map(Dual::index_extent).max().unwrap_or(0)
    }
    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        let mut c = rational::one();
        for (f, x) in self.phi.iter().zip(args) {
            c *= pairing(f, x)?;
        }
        Ok(self.v.scale(&c))
    }
    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        let s = pairing(y, &self.v)?;
        let phi = self.phi.clone();
        Ok(Form::new(models(&self.domain), self.threshold(), move |idx| {
            if s.is_zero() {
                return rational::zero();
            }
            let mut c = s.clone();
            for (f, &i) in phi.iter().zip(idx) {
                c *= dual_coeff(f, i);
                if c.is_zero() {
                    break;
                }
            }
            c
        }))
    }
    fn modulus(&self) -> Result<RegOperator> {
        Ok(self.with(self.phi.iter().map(Riesz::abs).collect(), self.v.abs()))
    }
    fn parts(&self) -> Option<Result<(RegOperator, RegOperator)>> {
        let m = self.phi.len();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for pattern in 0u32..(1 << (m + 1)) {
            let pick = |bit: usize| pattern >> bit & 1 == 1;
            let phi: Vec<Dual> = (0..m)
                .map(|r| if pick(r) { self.phi[r].neg_part() } else { self.phi[r].pos_part() })
                .collect();
            let v = if pick(m) { self.v.neg_part() } else { self.v.pos_part() };
            if v.is_zero() || phi.iter().any(Dual::is_zero) {
                continue;
            }
            let term = (rational::one(), self.with(phi, v));
            if pattern.count_ones() % 2 == 0 {
                pos.push(term);
            } else {
                neg.push(term);
            }
        }
        let build = |terms| {
            super::compose::Combination::new(self.domain.clone(), self.codomain.clone(), terms).map(RegOperator::new)
        };
        Some(build(pos).and_then(|p| Ok((p, build(neg)?))))
    }
    fn positive_rule(&self) -> Option<bool> {
        if self.is_zero_op() {
            return Some(true);
        }
        let mut s = primal_sign(&self.v)?;
        for f in &self.phi {
            s *= dual_sign(f)?;
        }
        Some(s > 0)
    }
    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        if self.is_zero_op() {
            return Some(RuleVerdict::Yes);
        }
        let homs = self.phi.iter().all(|f| dual_atoms(f).len() == 1);
        let ok = homs
            && primal_sign(&self.v).is_some_and(|sv| {
                let s: i32 = self.phi.iter().map(|f| sign(&dual_atoms(f)[0].1)).product();
                s * sv > 0
            });
        Some(if ok { RuleVerdict::Yes } else { RuleVerdict::No(self.witness()) })
    }
    fn to_json(&self) -> Value {
        json!({
            "kind": "finite_rank",
            "domain": self.domain,
            "phi": self.phi,
            "v": self.v,
            "codomain": self.codomain,
        })
    }
}

/// `A(x_1, …, x_m) = Σ_k w_k x_{1,k} ⋯ x_{m,k}` on the ℓ_1-model, scalar valued.
#[derive(Debug, Clone)]
pub struct WeightedDiagonal {
    domain: Vec<Space>,
    codomain: Space,
    weights: EvConstSeq,
}

impl WeightedDiagonal {
    pub fn new(arity: usize, weights: EvConstSeq) -> Result<WeightedDiagonal> {
        if arity == 0 {
            return Err(mismatch("weighted diagonal needs arity ≥ 1"));
        }
        Ok(WeightedDiagonal {
            domain: vec![Space::SeqL1; arity],
            codomain: Space::FinDim(1),
            weights,
        })
    }

    fn with(&self, weights: EvConstSeq) -> RegOperator {
        RegOperator::new(WeightedDiagonal { weights, ..self.clone() })
    }
}

impl OperatorRepr for WeightedDiagonal {
    fn kind(&self) -> &'static str {
        "weighted_diagonal"
    }
    fn domain(&self) -> &[Space] {
        &self.domain
    }
    fn codomain(&self) -> &Space {
        &self.codomain
    }
    fn threshold(&self) -> usize {
        self.weights.prefix_len()
    }
    fn apply(&self, args: &[Primal]) -> Result<Primal> {
        let seqs = args
            .iter()
            .map(|x| match x {
                Primal::Finsup(s) => Ok(s),
                _ => Err(mismatch("weighted diagonal takes ℓ_1-model arguments")),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = rational::zero();
        for (k, x1) in seqs[0].iter() {
            let mut term = x1 * self.weights.get(k);
            for x in &seqs[1..] {
                term *= x.get(k);
            }
            s += term;
        }
        Ok(Primal::Vec(VecElem::new(vec![s])))
    }
    fn compose_dual(&self, y: &Dual) -> Result<Form> {
        let s = dual_coeff(y, Idx::At(1));
        let w = self.weights.clone();
        Ok(Form::new(models(&self.domain), self.threshold(), move |idx| match idx[0] {
            Idx::At(k) if idx.iter().all(|&i| i == idx[0]) => &s * w.get(k),
            _ => rational::zero(),
        }))
    }
    fn modulus(&self) -> Result<RegOperator> {
        Ok(self.with(self.weights.abs()))
    }
    fn parts(&self) -> Option<Result<(RegOperator, RegOperator)>> {
        Some(Ok((self.with(self.weights.pos_part()), self.with(self.weights.neg_part()))))
    }
    fn positive_rule(&self) -> Option<bool> {
        Some(self.weights.is_positive())
    }
    fn multimorphism_rule(&self) -> Option<RuleVerdict> {
        let atoms = dual_atoms(&Dual::Evconst(self.weights.clone()));
        let m = self.domain.len();
        let unit = |i: Idx| Primal::Finsup(FinSupSeq::unit(i.finite().expect("finite atom")));
        if let Some((p, _)) = atoms.iter().find(|(_, w)| w.is_negative()) {
            return Some(RuleVerdict::No(vec![unit(*p); m]));
        }
        if atoms.len() >= 2 {
            let (p, q) = (unit(atoms[0].0), unit(atoms[1].0));
            let mut x = vec![p.add(&q); m];
            x[0] = p.sub(&q);
            return Some(RuleVerdict::No(x));
        }
        Some(RuleVerdict::Yes)
    }
    fn to_json(&self) -> Value {
        json!({"kind": "weighted_diagonal", "arity": self.domain.len(), "weights": self.weights})
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bidual::CDualElem;
    use crate::rational::int;

    fn fs(pairs: &[(usize, i64)]) -> Primal {
        Primal::Finsup(FinSupSeq::from_pairs(pairs.iter().map(|&(i, v)| (i, int(v)))))
    }

    #[test]
    fn upper_triangular_values() {
        let b = RegOperator::new(UpperTriangular::new(Space::SeqL1).unwrap());
        let v = b.evaluate(&[fs(&[(1, 1)]), fs(&[(2, 1)])]).unwrap();
        assert_eq!(v, Primal::Vec(VecElem::from_ints(&[1])));
        let v = b.evaluate(&[fs(&[(2, 1)]), fs(&[(1, 1)])]).unwrap();
        assert_eq!(v, Primal::Vec(VecElem::from_ints(&[0])));
        let c = RegOperator::new(UpperTriangular::new(Space::SeqC).unwrap());
        let ones = Primal::Evconst(EvConstSeq::constant(int(1)));
        assert!(matches!(c.evaluate(&[ones.clone(), ones]), Err(Error::NotRepresentable(_))));
    }

    #[test]
    fn c_model_product() {
        let a = RegOperator::new(CoordProduct::new(Space::SeqC, 2).unwrap());
        let x = Primal::Evconst(EvConstSeq::new(vec![int(1)], int(2)));
        let y = Primal::Evconst(EvConstSeq::new(vec![int(3)], int(1)));
        assert_eq!(
            a.evaluate(&[x, y]).unwrap(),
            Primal::Evconst(EvConstSeq::new(vec![int(3)], int(2)))
        );
    }

    #[test]
    fn finite_rank_modulus() {
        let a = RegOperator::new(
            FiniteRankProduct::new(
                vec![Space::FinDim(2)],
                vec![Dual::Vec(VecElem::from_ints(&[-1, 0]))],
                Primal::Vec(VecElem::from_ints(&[1])),
                Space::FinDim(1),
            )
            .unwrap(),
        );
        assert!(!a.is_positive());
        let m = a.modulus().unwrap();
        assert_eq!(m.to_json()["phi"][0], json!({"vec": [[1, 1], [0, 1]]}));
        let (p, n) = a.parts().unwrap();
        let x = [Primal::Vec(VecElem::from_ints(&[3, 5]))];
        let diff = p.evaluate(&x).unwrap().sub(&n.evaluate(&x).unwrap());
        assert_eq!(diff, a.evaluate(&x).unwrap());
    }

    #[test]
    fn rule_witnesses_violate_the_identity() {
        let ops = [
            RegOperator::new(WeightedDiagonal::new(2, EvConstSeq::new(vec![int(1), int(2)], int(0))).unwrap()),
            RegOperator::new(WeightedDiagonal::new(3, EvConstSeq::new(vec![int(1)], int(-1))).unwrap()),
            RegOperator::new(
                FiniteRankProduct::new(
                    vec![Space::SeqL1, Space::SeqC],
                    vec![Dual::Evconst(EvConstSeq::constant(int(1))), Dual::CDual(CDualElem::limit())],
                    Primal::Vec(VecElem::from_ints(&[1, 2])),
                    Space::FinDim(2),
                )
                .unwrap(),
            ),
            RegOperator::new(
                FiniteRankProduct::new(
                    vec![Space::SeqC],
                    vec![Dual::CDual(CDualElem::new(int(1), FinSupSeq::from_pairs([(2, int(-3))])))],
                    Primal::Vec(VecElem::from_ints(&[1])),
                    Space::FinDim(1),
                )
                .unwrap(),
            ),
            RegOperator::new(UpperTriangular::new(Space::SeqL1).unwrap()),
        ];
        for a in ops {
            let Some(RuleVerdict::No(x)) = a.repr().multimorphism_rule() else {
                panic!("{a:?} should be rejected");
            };
            let lhs = a.evaluate(&x).unwrap().abs();
            let abs: Vec<Primal> = x.iter().map(Riesz::abs).collect();
            assert_ne!(lhs, a.evaluate(&abs).unwrap(), "{a:?}");
        }
    }
}
