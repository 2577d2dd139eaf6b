use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Riesz, VecElem};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomVerdict {
    Yes,
    /// `|T x| != T|x|` at `witness`.
    No { witness: VecElem },
}

impl HomVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, HomVerdict::Yes)
    }
}

fn violates(t: &Matrix, x: &VecElem) -> bool {
    let lhs = t.apply(x).expect("shape checked").abs();
    let rhs = t.apply(&x.abs()).expect("shape checked");
    lhs != rhs
}

/// Decide whether the matrix is a Riesz homomorphism `R^cols -> R^rows`.
///
/// The structural certificate (one nonnegative entry per row at most) is
/// cross-checked against exhaustive `±1` sign patterns over the columns that
/// carry a nonzero entry; a disagreement is reported as an invariant
/// violation.
pub fn is_riesz_hom(t: &Matrix) -> Result<HomVerdict> {
    let structural = t.is_structural_hom();
    let support: Vec<usize> = (1..=t.cols)
        .filter(|&c| (1..=t.rows).any(|r| !t.get(r, c).is_zero()))
        .collect();
    assert!(support.len() < 24, "sign enumeration limited to desk scale");

    let mut witness = None;
    for pattern in 0u32..(1 << support.len()) {
        let mut x = VecElem::zeros(t.cols);
        for (j, &c) in support.iter().enumerate() {
            let negative = pattern >> (support.len() - 1 - j) & 1 == 1;
            x.0[c - 1] = if negative { -rational::one() } else { rational::one() };
        }
        if violates(t, &x) {
            witness = Some(x);
            break;
        }
    }

    match (structural, witness) {
        (true, None) => Ok(HomVerdict::Yes),
        (false, Some(w)) => Ok(HomVerdict::No { witness: w }),
        (true, Some(w)) => Err(Error::InvariantViolation(format!(
            "structural hom certificate refuted at {w:?}"
        ))),
        (false, None) => Err(Error::InvariantViolation(
            "matrix fails the structural hom certificate but no sign pattern refutes it".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_diagonal_is_hom() {
        let t = Matrix::from_int_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(is_riesz_hom(&t).unwrap(), HomVerdict::Yes);
    }

    #[test]
    fn summing_row_is_not_hom() {
        let t = Matrix::from_int_rows(&[&[1, 1]]);
        let HomVerdict::No { witness } = is_riesz_hom(&t).unwrap() else {
            panic!("expected a witness");
        };
        assert_eq!(witness, VecElem::from_ints(&[1, -1]));
        assert_eq!(t.apply(&witness).unwrap().abs(), VecElem::from_ints(&[0]));
        assert_eq!(t.apply(&witness.abs()).unwrap(), VecElem::from_ints(&[2]));
    }

    #[test]
    fn zero_map_is_hom() {
        assert!(is_riesz_hom(&Matrix::zeros(2, 3)).unwrap().is_yes());
    }

    #[test]
    fn negative_entry_is_not_hom() {
        let t = Matrix::from_int_rows(&[&[0, -1]]);
        assert!(!is_riesz_hom(&t).unwrap().is_yes());
    }
}
