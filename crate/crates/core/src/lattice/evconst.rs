use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::Riesz;
use crate::rational::{self, Rational};

/// Eventually constant sequence: `x_i = prefix[i]` for `i <= prefix.len()`,
/// `tail` afterwards.
///
/// Canonical form (enforced on construction): the last prefix entry differs
/// from the tail, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "EvConstWire", into = "EvConstWire")]
pub struct EvConstSeq {
    prefix: Vec<Rational>,
    tail: Rational,
}

#[derive(Serialize, Deserialize)]
struct EvConstWire {
    #[serde(with = "rational::pair_vec")]
    prefix: Vec<Rational>,
    #[serde(with = "rational::pair")]
    tail: Rational,
}

impl TryFrom<EvConstWire> for EvConstSeq {
    type Error = String;
    fn try_from(w: EvConstWire) -> Result<Self, String> {
        Ok(EvConstSeq::new(w.prefix, w.tail))
    }
}

impl From<EvConstSeq> for EvConstWire {
    fn from(x: EvConstSeq) -> Self {
        EvConstWire {
            prefix: x.prefix,
            tail: x.tail,
        }
    }
}

impl EvConstSeq {
    pub fn new(mut prefix: Vec<Rational>, tail: Rational) -> Self {
        while prefix.last().is_some_and(|p| *p == tail) {
            prefix.pop();
        }
        EvConstSeq { prefix, tail }
    }

    pub fn constant(c: Rational) -> Self {
        EvConstSeq::new(Vec::new(), c)
    }

    /// The unit sequence `e_i` (tail zero).
    pub fn unit(i: usize) -> Self {
        let mut prefix = vec![rational::zero(); i];
        prefix[i - 1] = rational::one();
        EvConstSeq::new(prefix, rational::zero())
    }

    /// Build from a coordinate function on `1..=len` and the tail value.
    pub fn from_fn(len: usize, tail: Rational, f: impl Fn(usize) -> Rational) -> Self {
        EvConstSeq::new((1..=len).map(f).collect(), tail)
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn tail(&self) -> &Rational {
        &self.tail
    }

    /// Coordinate `i` (1-based).
    pub fn get(&self, i: usize) -> Rational {
        assert!(i >= 1, "sequence indices are 1-based");
        self.prefix.get(i - 1).cloned().unwrap_or_else(|| self.tail.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (1..=len).map(|i| f(&self.get(i), &other.get(i))).collect();
        EvConstSeq::new(prefix, f(&self.tail, &other.tail))
    }

    /// Coordinatewise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }
}

impl Riesz for EvConstSeq {
    fn compatible(&self, _: &Self) -> bool {
        true
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
        EvConstSeq::new(self.prefix.iter().map(|a| a * c).collect(), &self.tail * c)
    }
    fn zero_like(&self) -> Self {
        EvConstSeq::constant(rational::zero())
    }
    fn is_positive(&self) -> bool {
        !self.tail.is_negative() && self.prefix.iter().all(|a| !a.is_negative())
    }
    fn is_zero(&self) -> bool {
        use num_traits::Zero;
        self.prefix.is_empty() && self.tail.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn canonical_on_construction() {
        let x = EvConstSeq::new(vec![int(1), int(2), int(2)], int(2));
        assert_eq!(x.prefix(), &[int(1)]);
        assert_eq!(x.get(7), int(2));
        assert_eq!(EvConstSeq::unit(3).prefix_len(), 3);
    }

    #[test]
    fn wire_form_canonicalizes() {
        let x: EvConstSeq =
            serde_json::from_str(r#"{"prefix":[[1,1],[3,1]],"tail":[3,1]}"#).unwrap();
        assert_eq!(x, EvConstSeq::new(vec![int(1)], int(3)));
    }
}
