//! Dense rational matrices and exact row reduction.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Result};
use crate::lattice::VecElem;
use crate::rational::{self, Rational};

/// Row-major rational matrix mapping `R^cols -> R^rows`; serializes as a
/// list of rows of `[num, den]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<Rational>>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<(i128, i128)>> = self
            .data
            .iter()
            .map(|r| r.iter().map(rational::to_pair).collect())
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        use serde::de::Error as _;
        let v = Vec::<Vec<(i128, i128)>>::deserialize(d)?;
        let data = v
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|(n, den)| rational::from_pair(n, den).map_err(D::Error::custom))
                    .collect()
            })
            .collect::<Result<Vec<Vec<Rational>>, D::Error>>()?;
        Matrix::from_rows(data).map_err(D::Error::custom)
    }
}

impl Matrix {
    pub fn from_rows(data: Vec<Vec<Rational>>) -> Result<Matrix> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || data.iter().any(|r| r.len() != cols) {
            return Err(mismatch("matrix rows must be non-empty and of equal length"));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational::int(x)).collect())
                .collect(),
        )
        .expect("well-formed literal matrix")
    }

    pub fn identity(n: usize) -> Matrix {
        let data = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rational::one() } else { rational::zero() }).collect())
            .collect();
        Matrix { rows: n, cols: n, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![vec![rational::zero(); cols]; rows],
        }
    }

    /// 1-based entry.
    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r - 1][c - 1]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r - 1][c - 1] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r - 1]
    }

    pub fn apply(&self, x: &VecElem) -> Result<VecElem> {
        if x.len() != self.cols {
            return Err(mismatch(format!(
                "matrix with {} columns applied to vector of length {}",
                self.cols,
                x.len()
            )));
        }
        Ok(VecElem::new(
            self.data
                .iter()
                .map(|r| r.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn transpose(&self) -> Matrix {
        let data = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.data[r][c].clone()).collect())
            .collect();
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(mismatch("matrix product shapes do not chain"));
        }
        let data = (0..self.rows)
            .map(|r| {
                (0..other.cols)
                    .map(|c| (0..self.cols).map(|k| &self.data[r][k] * &other.data[k][c]).sum())
                    .collect()
            })
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().flatten().all(|a| !a.is_negative())
    }

    pub fn abs(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(rational::abs).collect())
                .collect(),
        }
    }

    /// Structural Riesz-homomorphism certificate: each row has at most one
    /// nonzero entry and it is positive.
    pub fn is_structural_hom(&self) -> bool {
        self.data.iter().all(|r| {
            let nz: Vec<&Rational> = r.iter().filter(|a| !a.is_zero()).collect();
            nz.len() <= 1 && nz.iter().all(|a| a.is_positive())
        })
    }
}

/// Reduced row echelon form of the given row vectors; returns the nonzero
/// rows, which form a basis of their span.
pub fn row_basis(vectors: &[VecElem]) -> Vec<VecElem> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a = &*a - &f * b;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows.into_iter().map(VecElem::new).collect()
}

pub fn rank(vectors: &[VecElem]) -> usize {
    row_basis(vectors).len()
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[VecElem], v: &VecElem) -> bool {
    let mut all = basis.to_vec();
    all.push(v.clone());
    rank(&all) == rank(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_span() {
        let a = VecElem::from_ints(&[1, 2, 0]);
        let b = VecElem::from_ints(&[2, 4, 0]);
        let c = VecElem::from_ints(&[0, 0, 1]);
        assert_eq!(rank(&[a.clone(), b.clone()]), 1);
        assert_eq!(rank(&[a.clone(), b, c.clone()]), 2);
        assert!(in_span(&[a.clone(), c.clone()], &VecElem::from_ints(&[1, 2, 5])));
        assert!(!in_span(&[a], &c));
    }

    #[test]
    fn products() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[0, 1]]);
        let id = Matrix::identity(2);
        assert_eq!(m.mul(&id).unwrap(), m);
        assert_eq!(m.apply(&VecElem::from_ints(&[1, 1])).unwrap(), VecElem::from_ints(&[3, 1]));
        assert_eq!(m.transpose().get(2, 1), &rational::int(2));
    }
}
