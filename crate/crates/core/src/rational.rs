//! Exact rational scalars.
//!
//! Every scalar in the workbench is a reduced `BigRational`; nothing is ever
//! rounded. On the wire a rational is the integer pair `[numerator, denominator]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn pos(x: &Rational) -> Rational {
    max(x, &Rational::zero())
}

pub fn neg(x: &Rational) -> Rational {
    max(&-x, &Rational::zero())
}

/// `[num, den]` pair, failing if either part exceeds `i128`.
pub fn to_pair(x: &Rational) -> (i128, i128) {
    let n = x.numer().to_i128().expect("numerator exceeds i128");
    let d = x.denom().to_i128().expect("denominator exceeds i128");
    (n, d)
}

pub fn from_pair(num: i128, den: i128) -> Result<Rational, String> {
    if den == 0 {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn fmt(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter: `#[serde(with = "crate::rational::pair")]`.
pub mod pair {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_pair(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let (n, den) = <(i128, i128)>::deserialize(d)?;
        from_pair(n, den).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of pairs.
pub mod pair_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i128, i128)> = xs.iter().map(to_pair).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let pairs = Vec::<(i128, i128)>::deserialize(d)?;
        pairs
            .into_iter()
            .map(|(n, den)| from_pair(n, den).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let x = rat(4, -6);
        assert_eq!(to_pair(&x), (-2, 3));
        assert_eq!(fmt(&x), "-2/3");
        assert_eq!(fmt(&int(5)), "5");
    }

    #[test]
    fn parts() {
        assert_eq!(pos(&rat(-1, 2)), zero());
        assert_eq!(neg(&rat(-1, 2)), rat(1, 2));
        assert!(from_pair(1, 0).is_err());
    }
}
