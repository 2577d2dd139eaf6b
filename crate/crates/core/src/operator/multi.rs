//! Multimorphism and positivity certification, and the Kusraev factorization
//! of scalar multimorphisms on finite-dimensional spaces.

use num_traits::Zero;
use serde::Serialize;

use super::catalog::atom;
use super::form::Idx;
use super::repr::{RegOperator, RuleVerdict};
use super::tensor::{index_tuples, TensorOp};
use crate::error::{Error, Result};
use crate::lattice::{Dual, Model, Primal, Riesz, Space, VecElem};
use crate::rational;
use crate::sample;

/// Largest number of sign bits enumerated exhaustively.
const SIGN_BITS_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    Structural,
    Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub method: CertMethod,
    pub sign_patterns: usize,
    pub random_tuples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MultiVerdict {
    Yes { certificate: Certificate },
    No { witness: Vec<Primal> },
}

impl MultiVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, MultiVerdict::Yes { .. })
    }
}

/// `|A(x_1..x_m)| = A(|x_1|..|x_m|)` at one tuple.
pub fn multimorphism_holds(a: &RegOperator, args: &[Primal]) -> Result<bool> {
    let lhs = a.evaluate(args)?.abs();
    let abs: Vec<Primal> = args.iter().map(Riesz::abs).collect();
    Ok(lhs == a.evaluate(&abs)?)
}

fn random_search(a: &RegOperator, budget: usize, seed: u64) -> Result<Option<Vec<Primal>>> {
    let mut rng = sample::rng(seed);
    for _ in 0..budget {
        let args: Vec<Primal> = a.domain().iter().map(|s| sample::primal(s, &mut rng)).collect();
        if !multimorphism_holds(a, &args)? {
            return Ok(Some(args));
        }
    }
    Ok(None)
}

/// Sign-pattern tuples over the slot supports of `t`, with unit magnitudes.
/// Patterns run with the last coordinate fastest.
fn sign_tuples(t: &TensorOp) -> Option<Vec<Vec<VecElem>>> {
    let supports: Vec<Vec<usize>> = (0..t.dims().len()).map(|r| t.slot_support(r)).collect();
    let bits: usize = supports.iter().map(Vec::len).sum();
    if bits > SIGN_BITS_CAP {
        return None;
    }
    let mut out = Vec::with_capacity(1 << bits);
    for pattern in 0u64..(1u64 << bits) {
        let mut bit = bits;
        let tuple = supports
            .iter()
            .zip(t.dims())
            .map(|(supp, &n)| {
                let mut v = vec![rational::zero(); n];
                for &i in supp {
                    bit -= 1;
                    v[i - 1] = if pattern >> bit & 1 == 1 { rational::int(-1) } else { rational::one() };
                }
                VecElem::new(v)
            })
            .collect();
        out.push(tuple);
    }
    Some(out)
}

fn tensor_verdict(a: &RegOperator, t: &TensorOp, budget: usize, seed: u64) -> Result<MultiVerdict> {
    let structural = t.structural_multimorphism();
    let mut witness = None;
    let mut patterns = 0;
    if let Some(tuples) = sign_tuples(t) {
        patterns = tuples.len();
        for tuple in tuples {
            let refs: Vec<&VecElem> = tuple.iter().collect();
            let abs: Vec<VecElem> = tuple.iter().map(Riesz::abs).collect();
            let abs_refs: Vec<&VecElem> = abs.iter().collect();
            if t.apply_vecs(&refs).abs() != t.apply_vecs(&abs_refs) {
                witness = Some(tuple.into_iter().map(Primal::Vec).collect::<Vec<_>>());
                break;
            }
        }
    }
    if witness.is_none() {
        witness = random_search(a, budget, seed)?;
    }
    match (structural, witness) {
        (true, None) => Ok(MultiVerdict::Yes {
            certificate: Certificate {
                method: CertMethod::Structural,
                sign_patterns: patterns,
                random_tuples: budget,
            },
        }),
        (false, Some(w)) => Ok(MultiVerdict::No { witness: w }),
        (true, Some(w)) => Err(Error::InvariantViolation(format!(
            "structural certificate holds but the identity fails at {}",
            serde_json::to_string(&w).unwrap_or_default()
        ))),
        (false, None) if patterns > 0 => Err(Error::InvariantViolation(
            "structural certificate fails but no sign pattern violates the identity".into(),
        )),
        (false, None) => Err(Error::Unsupported(
            "support too large for exhaustive sign enumeration and no random witness found".into(),
        )),
    }
}

/// Certify `A` as a Riesz multimorphism or produce a witness tuple.
///
/// Finite-dimensional operators go through the tensor certificate, always
/// cross-checked by sign enumeration and `budget` random tuples. Structured
/// operators use their rule; rule witnesses are re-verified definitionally.
pub fn is_multimorphism(a: &RegOperator, budget: usize, seed: u64) -> Result<MultiVerdict> {
    if a.is_finite_dimensional() {
        let t = a.to_tensor()?;
        let verdict = tensor_verdict(a, &t, budget, seed)?;
        if let Some(rule) = a.repr().multimorphism_rule() {
            if matches!(rule, RuleVerdict::Yes) != verdict.is_yes() {
                return Err(Error::InvariantViolation(format!(
                    "{} rule disagrees with its tensor certificate",
                    a.kind()
                )));
            }
        }
        return Ok(verdict);
    }
    match a.repr().multimorphism_rule() {
        Some(RuleVerdict::Yes) => match random_search(a, budget, seed)? {
            None => Ok(MultiVerdict::Yes {
                certificate: Certificate {
                    method: CertMethod::Rule,
                    sign_patterns: 0,
                    random_tuples: budget,
                },
            }),
            Some(w) => Err(Error::InvariantViolation(format!(
                "{} rule claims a multimorphism but fails at {}",
                a.kind(),
                serde_json::to_string(&w).unwrap_or_default()
            ))),
        },
        Some(RuleVerdict::No(w)) => {
            if multimorphism_holds(a, &w)? {
                return Err(Error::InvariantViolation(format!("{} rule witness does not violate the identity", a.kind())));
            }
            Ok(MultiVerdict::No { witness: w })
        }
        None => match random_search(a, budget, seed)? {
            Some(w) => Ok(MultiVerdict::No { witness: w }),
            None => Err(Error::Unsupported(format!("no multimorphism rule for {}", a.kind()))),
        },
    }
}

/// Positive basis elements of a slot: unit vectors up to `bound`, plus the
/// constant sequence on the c-model.
fn positive_basis(space: &Space, bound: usize) -> Vec<Primal> {
    match space.model() {
        Model::Fin(n) => (1..=n).map(|i| atom(space, Idx::At(i), 0)).collect(),
        Model::L1 => (1..=bound).map(|i| atom(space, Idx::At(i), 0)).collect(),
        Model::C => {
            let mut v: Vec<Primal> = (1..=bound).map(|i| atom(space, Idx::At(i), 0)).collect();
            v.push(atom(space, Idx::Limit, 0));
            v
        }
    }
}

/// Positivity by rule, cross-checked on positive basis tuples.
pub fn is_positive_op(a: &RegOperator) -> Result<bool> {
    let claimed = a.is_positive();
    let bound = a.threshold() + 2;
    let bases: Vec<Vec<Primal>> = a.domain().iter().map(|s| positive_basis(s, bound)).collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut all_positive = true;
    for idx in index_tuples(&dims) {
        let args: Vec<Primal> = idx.iter().zip(&bases).map(|(&i, b)| b[i - 1].clone()).collect();
        if !a.evaluate(&args)?.is_positive() {
            all_positive = false;
            break;
        }
    }
    if claimed && !all_positive {
        return Err(Error::InvariantViolation(format!("{} claims positivity but a basis value is negative", a.kind())));
    }
    if !claimed && all_positive && a.is_finite_dimensional() {
        return Err(Error::InvariantViolation(format!("{} has positive basis values but is not positive", a.kind())));
    }
    Ok(claimed)
}

/// Factor a scalar multimorphism on `R^{n_1} × … × R^{n_m}` as
/// `φ_1 ⊗ … ⊗ φ_m`. The scalar sits on `φ_1`.
pub fn kusraev_factor(b: &RegOperator) -> Result<Vec<Dual>> {
    if !b.is_finite_dimensional() || b.codomain().fin_dim() != Some(1) {
        return Err(Error::NotMultimorphism("factorization needs a scalar form on finite spaces".into()));
    }
    let t = b.to_tensor()?;
    if let MultiVerdict::No { witness } = is_multimorphism(b, 0, 0)? {
        return Err(Error::NotMultimorphism(format!(
            "identity fails at {}",
            serde_json::to_string(&witness).unwrap_or_default()
        )));
    }
    let dims = t.dims().to_vec();
    let nz = t.nonzeros();
    let Some((idx, _, lambda)) = nz.first() else {
        return Ok(dims.iter().map(|&n| Dual::Vec(VecElem::zeros(n))).collect());
    };
    Ok(idx
        .iter()
        .zip(&dims)
        .enumerate()
        .map(|(r, (&i, &n))| {
            let e = VecElem::unit(n, i);
            Dual::Vec(if r == 0 { e.scale(lambda) } else { e })
        })
        .collect())
}

/// Tensor of `φ_1 ⊗ … ⊗ φ_m`, scalar valued.
pub fn tensor_of_factors(factors: &[Dual]) -> Result<TensorOp> {
    let vecs: Vec<&VecElem> = factors
        .iter()
        .map(|f| match f {
            Dual::Vec(v) => Ok(v),
            _ => Err(Error::Unsupported("factors must be finite-dimensional functionals".into())),
        })
        .collect::<Result<_>>()?;
    let dims: Vec<usize> = vecs.iter().map(|v| v.len()).collect();
    let mut t = TensorOp::zeros(dims.clone(), Space::FinDim(1))?;
    for idx in index_tuples(&dims) {
        let v: rational::Rational = idx.iter().zip(&vecs).map(|(&i, f)| f.get(i)).product();
        if !v.is_zero() {
            t.set(&idx, 1, v);
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::catalog::{CoordProduct, UpperTriangular};

    fn form(dims: &[usize], entries: &[(&[usize], i64)]) -> RegOperator {
        RegOperator::new(TensorOp::scalar_form(dims, entries))
    }

    #[test]
    fn single_entry_form_is_multimorphism() {
        let b = form(&[2, 2], &[(&[2, 1], 3)]);
        let v = is_multimorphism(&b, 50, 1).unwrap();
        assert!(v.is_yes());
        if let MultiVerdict::Yes { certificate } = v {
            assert_eq!(certificate.sign_patterns, 4);
        }
    }

    #[test]
    fn diagonal_form_has_sign_witness() {
        let b = form(&[2, 2], &[(&[1, 1], 1), (&[2, 2], 1)]);
        let MultiVerdict::No { witness } = is_multimorphism(&b, 10, 1).unwrap() else {
            panic!("expected a witness");
        };
        assert!(!multimorphism_holds(&b, &witness).unwrap());
    }

    #[test]
    fn structured_rules() {
        let c = RegOperator::new(CoordProduct::new(Space::SeqL1, 2).unwrap());
        assert!(is_multimorphism(&c, 30, 2).unwrap().is_yes());
        let u = RegOperator::new(UpperTriangular::new(Space::SeqL1).unwrap());
        assert!(!is_multimorphism(&u, 30, 2).unwrap().is_yes());
        assert!(is_positive_op(&u).unwrap());
    }

    #[test]
    fn negative_entry_is_not_positive() {
        assert!(!is_positive_op(&form(&[2], &[(&[1], -1)])).unwrap());
    }

    #[test]
    fn factors_reconstruct() {
        let b = form(&[2, 2], &[(&[2, 1], 3)]);
        let f = kusraev_factor(&b).unwrap();
        assert_eq!(f[0], Dual::Vec(VecElem::from_ints(&[0, 3])));
        assert_eq!(f[1], Dual::Vec(VecElem::from_ints(&[1, 0])));
        assert_eq!(&tensor_of_factors(&f).unwrap(), b.as_tensor().unwrap());
        let z = form(&[2, 3], &[]);
        let f = kusraev_factor(&z).unwrap();
        assert!(f.iter().all(Dual::is_zero));
        let bad = form(&[2, 2], &[(&[1, 1], 1), (&[2, 2], 1)]);
        assert!(matches!(kusraev_factor(&bad), Err(Error::NotMultimorphism(_))));
    }
}
