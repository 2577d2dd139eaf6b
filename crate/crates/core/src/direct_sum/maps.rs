//! The identifications between duals and biduals of a sum and sums of
//! duals and biduals. `ψ` maps belong to `p`-sums and `γ` maps to
//! zero-sums; both are built by evaluating their defining formulas on
//! coordinate probes.

use super::elem::{embed_component, project_component, DirectSumElem};
use super::{DirectSumSpace, SumMode};
use crate::bidual::Bidual;
use crate::error::{mismatch, Result};
use crate::lattice::{Dual, Riesz, Space, VecElem};
use crate::linalg::Matrix;
use crate::operator::LatticeMap;
use crate::rational::Rational;

/// A functional on the sum of duals, `Φ(w) = Σ_n Σ_i c_{n,i} w_{n,i}`,
/// stored by its flat coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumDualFunctional(pub VecElem);

impl SumDualFunctional {
    pub fn apply(&self, space: &DirectSumSpace, w: &DirectSumElem) -> Rational {
        self.0.dot(&w.to_flat(space))
    }
}

fn flat_unit(space: &DirectSumSpace, j: usize) -> VecElem {
    VecElem::unit(space.total_dim(), j)
}

/// Flat coordinate `j` as a (component, local index) pair.
fn locate(space: &DirectSumSpace, j: usize) -> (usize, usize) {
    let k = (1..=space.components.len())
        .find(|&k| space.block_range(k).contains(&j))
        .expect("index inside the sum");
    (k, j - space.block_range(k).start() + 1)
}

fn vec_of(f: &Dual) -> Result<&VecElem> {
    match f {
        Dual::Vec(v) => Ok(v),
        _ => Err(mismatch("sum duals are finite-dimensional")),
    }
}

fn bivec_of(x: &Bidual) -> Result<&VecElem> {
    match x {
        Bidual::Vec(v) => Ok(v),
        _ => Err(mismatch("sum biduals are finite-dimensional")),
    }
}

/// `ψ_1((y*_n))((y_n)) = Σ_n y*_n(y_n)`.
fn first(space: &DirectSumSpace, w: &DirectSumElem) -> Result<Dual> {
    let coords = (1..=space.total_dim())
        .map(|j| {
            let e = DirectSumElem::from_flat(space, &flat_unit(space, j))?;
            Ok((1..=space.components.len())
                .map(|n| w.block(space, n).dot(&e.block(space, n)))
                .sum())
        })
        .collect::<Result<Vec<Rational>>>()?;
    Ok(Dual::Vec(VecElem::new(coords)))
}

/// `ψ_1^{-1}(f) = (f ∘ i_n)_n`.
fn first_inv(space: &DirectSumSpace, f: &Dual) -> Result<DirectSumElem> {
    let f = vec_of(f)?;
    if f.len() != space.total_dim() {
        return Err(mismatch("functional has the wrong length for the sum"));
    }
    DirectSumElem::from_blocks(
        space,
        space.components.iter().enumerate().map(|(n, &d)| {
            let k = n + 1;
            let block = (1..=d)
                .map(|i| {
                    let e = embed_component(space, k, &VecElem::unit(d, i)).expect("unit fits");
                    f.dot(&e.to_flat(space))
                })
                .collect();
            (k, VecElem::new(block))
        }),
    )
}

/// `ψ_2((z_n))((w_n)) = Σ_n z_n(w_n)`.
fn second(space: &DirectSumSpace, z: &DirectSumElem) -> SumDualFunctional {
    SumDualFunctional(VecElem::new(
        (1..=space.total_dim())
            .map(|j| {
                let (k, i) = locate(space, j);
                let w = embed_component(space, k, &VecElem::unit(space.components[k - 1], i)).expect("unit fits");
                (1..=space.components.len())
                    .map(|n| z.block(space, n).dot(&w.block(space, n)))
                    .sum()
            })
            .collect(),
    ))
}

/// `ψ_2^{-1}(y**) = (y** ∘ i_n)_n`.
fn second_inv(space: &DirectSumSpace, phi: &SumDualFunctional) -> Result<DirectSumElem> {
    DirectSumElem::from_blocks(
        space,
        space.components.iter().enumerate().map(|(n, &d)| {
            let k = n + 1;
            let block = (1..=d)
                .map(|i| phi.apply(space, &embed_component(space, k, &VecElem::unit(d, i)).expect("unit fits")))
                .collect();
            (k, VecElem::new(block))
        }),
    )
}

/// `ψ_3 = (ψ_1^{-1})*`: `ψ_3(Φ)(f) = Φ(ψ_1^{-1}(f))`.
fn third(space: &DirectSumSpace, phi: &SumDualFunctional) -> Result<Bidual> {
    let coords = (1..=space.total_dim())
        .map(|j| Ok(phi.apply(space, &first_inv(space, &Dual::Vec(flat_unit(space, j)))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Bidual::Vec(VecElem::new(coords)))
}

/// `ψ_3^{-1}(x'') = x'' ∘ ψ_1`.
fn third_inv(space: &DirectSumSpace, x: &Bidual) -> Result<SumDualFunctional> {
    let v = bivec_of(x)?;
    if v.len() != space.total_dim() {
        return Err(mismatch("bidual element has the wrong length for the sum"));
    }
    let coords = (1..=space.total_dim())
        .map(|j| {
            let (k, i) = locate(space, j);
            let w = embed_component(space, k, &VecElem::unit(space.components[k - 1], i))?;
            Ok(v.dot(vec_of(&first(space, &w)?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SumDualFunctional(VecElem::new(coords)))
}

fn require(space: &DirectSumSpace, mode: SumMode) -> Result<()> {
    if space.mode != mode {
        return Err(mismatch(format!(
            "{} maps belong to {} sums",
            if mode == SumMode::P { "ψ" } else { "γ" },
            if mode == SumMode::P { "p" } else { "zero" }
        )));
    }
    Ok(())
}

macro_rules! mode_maps {
    ($mode:expr, $m1:ident, $m1i:ident, $m2:ident, $m2i:ident, $m3:ident, $m3i:ident, $total:ident, $total_inv:ident) => {
        pub fn $m1(space: &DirectSumSpace, w: &DirectSumElem) -> Result<Dual> {
            require(space, $mode)?;
            first(space, w)
        }
        pub fn $m1i(space: &DirectSumSpace, f: &Dual) -> Result<DirectSumElem> {
            require(space, $mode)?;
            first_inv(space, f)
        }
        pub fn $m2(space: &DirectSumSpace, z: &DirectSumElem) -> Result<SumDualFunctional> {
            require(space, $mode)?;
            Ok(second(space, z))
        }
        pub fn $m2i(space: &DirectSumSpace, phi: &SumDualFunctional) -> Result<DirectSumElem> {
            require(space, $mode)?;
            second_inv(space, phi)
        }
        pub fn $m3(space: &DirectSumSpace, phi: &SumDualFunctional) -> Result<Bidual> {
            require(space, $mode)?;
            third(space, phi)
        }
        pub fn $m3i(space: &DirectSumSpace, x: &Bidual) -> Result<SumDualFunctional> {
            require(space, $mode)?;
            third_inv(space, x)
        }
        /// Bidual of the sum to the sum of biduals, `m_2^{-1} ∘ m_3^{-1}`.
        pub fn $total(space: &DirectSumSpace, x: &Bidual) -> Result<DirectSumElem> {
            require(space, $mode)?;
            second_inv(space, &third_inv(space, x)?)
        }
        pub fn $total_inv(space: &DirectSumSpace, z: &DirectSumElem) -> Result<Bidual> {
            require(space, $mode)?;
            third(space, &second(space, z))
        }
    };
}

mode_maps!(SumMode::P, psi1, psi1_inv, psi2, psi2_inv, psi3, psi3_inv, psi, psi_inv);
mode_maps!(SumMode::Zero, gamma1, gamma1_inv, gamma2, gamma2_inv, gamma3, gamma3_inv, gamma, gamma_inv);

/// `ψ` or `γ` according to the mode of the sum.
pub fn to_blocks(space: &DirectSumSpace, x: &Bidual) -> Result<DirectSumElem> {
    match space.mode {
        SumMode::P => psi(space, x),
        SumMode::Zero => gamma(space, x),
    }
}

/// `π_k` as a lattice map from the sum onto component `k`.
pub fn block_projection(space: &DirectSumSpace, k: usize) -> Result<LatticeMap> {
    if k == 0 || k > space.components.len() {
        return Err(mismatch(format!("no component {k}")));
    }
    let d = space.components[k - 1];
    let mut m = Matrix::zeros(d, space.total_dim());
    for (r, j) in space.block_range(k).enumerate() {
        m.set(r + 1, j, crate::rational::one());
    }
    LatticeMap::matrix_between(m, Space::DirectSum(space.clone()), Space::FinDim(d))
}

/// Projection onto the band spanned by the given coordinates of a
/// finite-dimensional space.
pub fn band_project(space: &Space, band: &[usize]) -> Result<LatticeMap> {
    let n = space
        .fin_dim()
        .ok_or_else(|| mismatch("bands are supported on finite-dimensional spaces"))?;
    if let Some(&i) = band.iter().find(|&&i| i == 0 || i > n) {
        return Err(mismatch(format!("coordinate {i} is outside 1..{n}")));
    }
    let mut m = Matrix::zeros(n, n);
    for &i in band {
        m.set(i, i, crate::rational::one());
    }
    LatticeMap::matrix_between(m, space.clone(), space.clone())
}

/// `π_k(i_k(y)) = y` and both maps commute with the modulus; used by tests
/// and the transport report.
pub fn component_maps_are_homs(space: &DirectSumSpace, k: usize, y: &VecElem) -> Result<bool> {
    let z = embed_component(space, k, y)?;
    Ok(project_component(space, k, &z)? == *y
        && z.abs() == embed_component(space, k, &y.abs())?
        && project_component(space, k, &z.abs())? == project_component(space, k, &z)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Primal;
    use crate::rational::int;

    fn blocks(space: &DirectSumSpace, bs: &[&[i64]]) -> DirectSumElem {
        DirectSumElem::from_blocks(space, bs.iter().enumerate().map(|(k, b)| (k + 1, VecElem::from_ints(b)))).unwrap()
    }

    #[test]
    fn psi_of_j_image_is_blockwise() {
        let s = DirectSumSpace::p_sum(int(2), vec![1, 1]);
        let x = Bidual::Vec(VecElem::from_ints(&[1, 2]));
        assert_eq!(psi(&s, &x).unwrap(), blocks(&s, &[&[1], &[2]]));
        assert_eq!(psi_inv(&s, &psi(&s, &x).unwrap()).unwrap(), x);
        assert!(gamma(&s, &x).is_err());
    }

    #[test]
    fn first_maps_round_trip() {
        let s = DirectSumSpace::zero_sum(vec![2, 1, 3]);
        let w = blocks(&s, &[&[1, -2], &[0], &[3, 0, -1]]);
        let f = gamma1(&s, &w).unwrap();
        assert_eq!(gamma1_inv(&s, &f).unwrap(), w);
        let phi = gamma2(&s, &w).unwrap();
        assert_eq!(gamma2_inv(&s, &phi).unwrap(), w);
        assert_eq!(gamma3_inv(&s, &gamma3(&s, &phi).unwrap()).unwrap(), phi);
    }

    #[test]
    fn band_projection_is_idempotent() {
        let p = band_project(&Space::FinDim(3), &[1, 2]).unwrap();
        let x = Primal::Vec(VecElem::from_ints(&[1, 2, 3]));
        let px = p.apply(&x).unwrap();
        assert_eq!(px, Primal::Vec(VecElem::from_ints(&[1, 2, 0])));
        assert_eq!(p.apply(&px).unwrap(), px);
        assert!(p.is_hom() && p.is_positive());
    }
}
