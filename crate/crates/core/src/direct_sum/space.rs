use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumMode {
    /// `(⊕ F_n)_p`; `p` is order-inert for finitely many components.
    P,
    /// `(⊕ F_n)_0`.
    Zero,
}

/// Finite direct sum of finite-dimensional coordinatewise lattices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectSumSpace {
    pub mode: SumMode,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_pair")]
    pub p: Option<Rational>,
    pub components: Vec<usize>,
}

mod opt_pair {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(rational::to_pair).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        use serde::de::Error as _;
        Option::<(i64, i64)>::deserialize(d)?
            .map(|(n, den)| rational::from_pair(n as i128, den as i128).map_err(D::Error::custom))
            .transpose()
    }
}

impl DirectSumSpace {
    pub fn p_sum(p: Rational, components: Vec<usize>) -> Self {
        DirectSumSpace {
            mode: SumMode::P,
            p: Some(p),
            components,
        }
    }

    pub fn zero_sum(components: Vec<usize>) -> Self {
        DirectSumSpace {
            mode: SumMode::Zero,
            p: None,
            components,
        }
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().sum()
    }

    /// 1-based flat coordinate range of component `k` (1-based).
    pub fn block_range(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        let start: usize = self.components[..k - 1].iter().sum::<usize>() + 1;
        start..=start + self.components[k - 1] - 1
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.components.is_empty() {
            return Err("direct sum needs at least one component".into());
        }
        if self.components.contains(&0) {
            return Err("direct sum components must have dimension at least 1".into());
        }
        match (self.mode, &self.p) {
            (SumMode::P, Some(p)) if *p > Rational::one() => Ok(()),
            (SumMode::P, _) => Err("p-sum needs a rational p > 1".into()),
            (SumMode::Zero, None) => Ok(()),
            (SumMode::Zero, Some(_)) => Err("zero-sum takes no p".into()),
        }
    }
}

impl fmt::Display for DirectSumSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|n| format!("R^{n}")).collect();
        match (&self.mode, &self.p) {
            (SumMode::P, Some(p)) => write!(f, "({})_{}", parts.join(" ⊕ "), rational::fmt(p)),
            _ => write!(f, "({})_0", parts.join(" ⊕ ")),
        }
    }
}
