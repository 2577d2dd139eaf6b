use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Riesz;
use crate::rational::{self, Rational};

/// Finitely supported sequence; desk model of the ℓ_1-type lattice.
///
/// Indices are 1-based. Zero values are never stored, so the support is
/// minimal and structural equality is equality of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinSupSeq {
    support: BTreeMap<usize, Rational>,
}

impl FinSupSeq {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Unit vector `e_i`.
    pub fn unit(i: usize) -> Self {
        Self::from_pairs([(i, rational::one())])
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Rational)>>(pairs: I) -> Self {
        let mut s = Self::zero();
        for (i, v) in pairs {
            assert!(i >= 1, "sequence indices are 1-based");
            let cur = s.get(i);
            s.set(i, cur + v);
        }
        s
    }

    pub fn set(&mut self, i: usize, v: Rational) {
        if v.is_zero() {
            self.support.remove(&i);
        } else {
            self.support.insert(i, v);
        }
    }

    pub fn get(&self, i: usize) -> Rational {
        self.support.get(&i).cloned().unwrap_or_else(rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.support.iter().map(|(i, v)| (*i, v))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Largest index in the support, 0 for the zero sequence.
    pub fn max_index(&self) -> usize {
        self.support.keys().next_back().copied().unwrap_or(0)
    }

    pub fn sum(&self) -> Rational {
        self.support.values().sum()
    }

    fn merge(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let mut out = Self::zero();
        let keys: std::collections::BTreeSet<usize> =
            self.support.keys().chain(other.support.keys()).copied().collect();
        for i in keys {
            out.set(i, f(&self.get(i), &other.get(i)));
        }
        out
    }

    /// Coordinatewise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, v) in self.iter() {
            out.set(i, v * other.get(i));
        }
        out
    }
}

impl Riesz for FinSupSeq {
    fn compatible(&self, _: &Self) -> bool {
        true
    }
    fn sup(&self, other: &Self) -> Self {
        self.merge(other, rational::max)
    }
    fn inf(&self, other: &Self) -> Self {
        self.merge(other, rational::min)
    }
    fn add(&self, other: &Self) -> Self {
        self.merge(other, |a, b| a + b)
    }
    fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (i, v) in self.iter() {
            out.set(i, v * c);
        }
        out
    }
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn is_positive(&self) -> bool {
        self.support.values().all(|v| !v.is_negative())
    }
    fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

/// Wire form: list of `[index, num, den]` triples.
impl Serialize for FinSupSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let triples: Vec<(usize, i128, i128)> = self
            .iter()
            .map(|(i, v)| {
                let (n, d) = rational::to_pair(v);
                (i, n, d)
            })
            .collect();
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinSupSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let triples = Vec::<(usize, i128, i128)>::deserialize(d)?;
        let mut pairs = Vec::with_capacity(triples.len());
        for (i, n, den) in triples {
            if i == 0 {
                return Err(D::Error::custom("sequence indices are 1-based"));
            }
            pairs.push((i, rational::from_pair(n, den).map_err(D::Error::custom)?));
        }
        Ok(FinSupSeq::from_pairs(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn zeros_are_normalized_away() {
        let x = FinSupSeq::from_pairs([(2, int(3)), (2, int(-3)), (4, int(1))]);
        assert_eq!(x.len(), 1);
        assert_eq!(x.max_index(), 4);
        let y = x.sub(&x);
        assert!(y.is_empty());
    }
}
