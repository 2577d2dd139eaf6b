use serde::{Deserialize, Serialize};

use super::Riesz;
use crate::rational::{self, Rational};

/// Element of `R^n` with the coordinatewise order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VecElem(#[serde(with = "rational::pair_vec")] pub Vec<Rational>);

impl VecElem {
    pub fn new(coords: Vec<Rational>) -> Self {
        VecElem(coords)
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        VecElem(xs.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        VecElem(vec![rational::zero(); n])
    }

    /// Unit vector `e_i` (1-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i - 1] = rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinate `i` (1-based); zero outside `1..=n`.
    pub fn get(&self, i: usize) -> Rational {
        if i >= 1 && i <= self.0.len() {
            self.0[i - 1].clone()
        } else {
            rational::zero()
        }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dot(&self, other: &VecElem) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        VecElem(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    /// Sup norm, used to normalize atoms.
    pub fn sup_norm(&self) -> Rational {
        self.0
            .iter()
            .map(rational::abs)
            .fold(rational::zero(), |m, x| rational::max(&m, &x))
    }

    /// Indices (1-based) of nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        use num_traits::Zero;
        (1..=self.len()).filter(|&i| !self.0[i - 1].is_zero()).collect()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.abs().inf(&other.abs()).is_zero()
    }
}

impl Riesz for VecElem {
    fn compatible(&self, other: &Self) -> bool {
        self.len() == other.len()
    }
    fn sup(&self, other: &Self) -> Self {
        self.zip_with(other, rational::max)
    }
    fn inf(&self, other: &Self) -> Self {
        self.zip_with(other, rational::min)
    }
    fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
    fn scale(&self, c: &Rational) -> Self {
        VecElem(self.0.iter().map(|a| a * c).collect())
    }
    fn zero_like(&self) -> Self {
        Self::zeros(self.len())
    }
    fn is_positive(&self) -> bool {
        use num_traits::Signed;
        self.0.iter().all(|a| !a.is_negative())
    }
    fn is_zero(&self) -> bool {
        use num_traits::Zero;
        self.0.iter().all(|a| a.is_zero())
    }
}
