use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DirectSumSpace;
use crate::error::{mismatch, Result};
use crate::lattice::{Riesz, VecElem};

/// Element of a finite direct sum, stored by component; absent blocks are
/// zero.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DirectSumElem {
    pub blocks: BTreeMap<usize, VecElem>,
}

impl DirectSumElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_blocks(space: &DirectSumSpace, blocks: impl IntoIterator<Item = (usize, VecElem)>) -> Result<Self> {
        let mut out = DirectSumElem::zero();
        for (k, v) in blocks {
            let n = *space
                .components
                .get(k.wrapping_sub(1))
                .ok_or_else(|| mismatch(format!("no component {k}")))?;
            if v.len() != n {
                return Err(mismatch(format!("block {k} must have length {n}")));
            }
            if !v.is_zero() {
                out.blocks.insert(k, v);
            }
        }
        Ok(out)
    }

    pub fn block(&self, space: &DirectSumSpace, k: usize) -> VecElem {
        self.blocks
            .get(&k)
            .cloned()
            .unwrap_or_else(|| VecElem::zeros(space.components[k - 1]))
    }

    pub fn from_flat(space: &DirectSumSpace, x: &VecElem) -> Result<Self> {
        if x.len() != space.total_dim() {
            return Err(mismatch("flat vector has the wrong length for the sum"));
        }
        Self::from_blocks(
            space,
            (1..=space.components.len())
                .map(|k| (k, VecElem::new(space.block_range(k).map(|i| x.get(i)).collect()))),
        )
    }

    pub fn to_flat(&self, space: &DirectSumSpace) -> VecElem {
        VecElem::new(
            (1..=space.components.len())
                .flat_map(|k| self.block(space, k).coords().to_vec())
                .collect(),
        )
    }

    fn map2(&self, other: &Self, space: &DirectSumSpace, f: impl Fn(&VecElem, &VecElem) -> VecElem) -> Self {
        let blocks = (1..=space.components.len())
            .map(|k| (k, f(&self.block(space, k), &other.block(space, k))))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        DirectSumElem { blocks }
    }

    pub fn sup(&self, other: &Self, space: &DirectSumSpace) -> Self {
        self.map2(other, space, VecElem::sup)
    }

    pub fn inf(&self, other: &Self, space: &DirectSumSpace) -> Self {
        self.map2(other, space, VecElem::inf)
    }

    pub fn abs(&self) -> Self {
        DirectSumElem {
            blocks: self.blocks.iter().map(|(k, v)| (*k, v.abs())).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.blocks.values().all(VecElem::is_positive)
    }
}

/// `i_k(y)`.
pub fn embed_component(space: &DirectSumSpace, k: usize, y: &VecElem) -> Result<DirectSumElem> {
    DirectSumElem::from_blocks(space, [(k, y.clone())])
}

/// `π_k(z)`.
pub fn project_component(space: &DirectSumSpace, k: usize, z: &DirectSumElem) -> Result<VecElem> {
    if k == 0 || k > space.components.len() {
        return Err(mismatch(format!("no component {k}")));
    }
    Ok(z.block(space, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn embed_and_project() {
        let s = DirectSumSpace::p_sum(int(2), vec![2, 2]);
        let y = VecElem::from_ints(&[1, -1]);
        let z = embed_component(&s, 2, &y).unwrap();
        assert_eq!(z.blocks.len(), 1);
        assert_eq!(project_component(&s, 2, &z).unwrap(), y);
        assert_eq!(project_component(&s, 1, &z).unwrap(), VecElem::zeros(2));
        assert_eq!(z.abs(), embed_component(&s, 2, &y.abs()).unwrap());
        assert_eq!(z.to_flat(&s), VecElem::from_ints(&[0, 0, 1, -1]));
        assert!(embed_component(&s, 3, &y).is_err());
    }
}
