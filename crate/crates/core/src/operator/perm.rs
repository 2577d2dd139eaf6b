use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Result};

/// A permutation of `{1..m}` in one-line notation: `images[k-1] = ρ(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = String;
    fn try_from(images: Vec<usize>) -> Result<Self, String> {
        Permutation::new(images).map_err(|e| e.to_string())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &i in &images {
            if i == 0 || i > m || seen[i] {
                return Err(mismatch(format!("{images:?} is not a permutation of 1..{m}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (1..=m).collect(),
        }
    }

    /// Backward shift: `θ(1) = m`, `θ(k) = k - 1` for `k ≥ 2`.
    pub fn theta(m: usize) -> Self {
        Permutation {
            images: (1..=m).map(|k| if k == 1 { m } else { k - 1 }).collect(),
        }
    }

    /// `ρ(k) = m + 1 - k`.
    pub fn reversal(m: usize) -> Self {
        Permutation {
            images: (1..=m).rev().collect(),
        }
    }

    /// All `m!` permutations in lexicographic order.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(m);
        let mut used = vec![false; m + 1];
        fn rec(m: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == m {
                out.push(Permutation { images: cur.clone() });
                return;
            }
            for i in 1..=m {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(m, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(m, &mut current, &mut used, &mut out);
        out
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    /// `ρ(k)` for 1-based `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_is_backward_shift() {
        assert_eq!(Permutation::theta(3).images(), &[3, 1, 2]);
        assert_eq!(Permutation::theta(2), Permutation::reversal(2));
        assert_ne!(Permutation::theta(3), Permutation::reversal(3));
        assert_eq!(Permutation::theta(1), Permutation::identity(1));
    }

    #[test]
    fn enumeration() {
        let all = Permutation::all(3);
        assert_eq!(all.len(), 6);
        assert!(all[0].is_identity());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(serde_json::from_str::<Permutation>("[2,1]").is_ok());
        assert!(serde_json::from_str::<Permutation>("[3,1]").is_err());
    }
}
