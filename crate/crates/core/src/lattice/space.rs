use std::fmt;

use serde::{Deserialize, Serialize};

use crate::direct_sum::DirectSumSpace;

/// The spaces the workbench can compute in.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Space {
    /// `R^n` with the coordinatewise order.
    FinDim { n: usize },
    /// Finitely supported sequences, dual model: eventually constant sequences.
    SeqL1,
    /// Eventually constant sequences, dual model: limit functional plus ℓ_1 part.
    SeqC,
    /// Finite direct sum of finite-dimensional lattices.
    DirectSum(DirectSumSpace),
}

/// How a space is represented for computation: dimension for the reflexive
/// finite-dimensional case, or one of the two sequence models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Fin(usize),
    L1,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Primal,
    DualModel,
    BidualModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceRef {
    pub space: Space,
    pub role: Role,
}

#[allow(non_snake_case)]
impl Space {
    pub fn FinDim(n: usize) -> Space {
        assert!(n >= 1, "FinDim dimension must be at least 1");
        Space::FinDim { n }
    }

    pub fn model(&self) -> Model {
        match self {
            Space::FinDim { n } => Model::Fin(*n),
            Space::SeqL1 => Model::L1,
            Space::SeqC => Model::C,
            Space::DirectSum(d) => Model::Fin(d.total_dim()),
        }
    }

    /// Dimension when the space is finite dimensional.
    pub fn fin_dim(&self) -> Option<usize> {
        match self.model() {
            Model::Fin(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.fin_dim().is_some()
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            Space::FinDim { n } if *n == 0 => Err("FinDim dimension must be at least 1".into()),
            Space::DirectSum(d) => d.validate(),
            _ => Ok(()),
        }
    }

    pub fn as_ref(&self, role: Role) -> SpaceRef {
        SpaceRef {
            space: self.clone(),
            role,
        }
    }
}

impl SpaceRef {
    /// Concrete model that elements of this role are represented in.
    pub fn model_name(&self) -> &'static str {
        match (self.space.model(), self.role) {
            (Model::Fin(_), _) => "vec",
            (Model::L1, Role::Primal) => "finsup",
            (Model::L1, Role::DualModel) => "evconst",
            (Model::L1, Role::BidualModel) => "l1_bidual",
            (Model::C, Role::Primal) => "evconst",
            (Model::C, Role::DualModel) => "c_dual",
            (Model::C, Role::BidualModel) => "c_bidual",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::FinDim { n } => write!(f, "R^{n}"),
            Space::SeqL1 => write!(f, "l1-model"),
            Space::SeqC => write!(f, "c-model"),
            Space::DirectSum(d) => write!(f, "{d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_models() {
        assert_eq!(Space::SeqL1.as_ref(Role::DualModel).model_name(), "evconst");
        assert_eq!(Space::SeqC.as_ref(Role::DualModel).model_name(), "c_dual");
        assert_eq!(Space::FinDim(3).as_ref(Role::BidualModel).model_name(), "vec");
    }

    #[test]
    fn json() {
        let s: Space = serde_json::from_str(r#"{"kind":"fin_dim","n":3}"#).unwrap();
        assert_eq!(s, Space::FinDim(3));
        let s: Space = serde_json::from_str(r#"{"kind":"seq_l1"}"#).unwrap();
        assert_eq!(s, Space::SeqL1);
        assert!(Space::FinDim { n: 0 }.validate().is_err());
    }
}
