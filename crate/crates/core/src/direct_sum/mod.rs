//! Finite direct sums of finite-dimensional lattices.

mod elem;
mod maps;
mod space;
mod transport;

pub use elem::{embed_component, project_component, DirectSumElem};
pub use maps::{
    band_project, block_projection, component_maps_are_homs, gamma, gamma1, gamma1_inv, gamma2, gamma2_inv, gamma3,
    gamma3_inv, gamma_inv, psi, psi1, psi1_inv, psi2, psi2_inv, psi3, psi3_inv, psi_inv, to_blocks, SumDualFunctional,
};
pub use space::{DirectSumSpace, SumMode};
pub use transport::{check_band_projection, transport_check, BandReport, TransportReport};
