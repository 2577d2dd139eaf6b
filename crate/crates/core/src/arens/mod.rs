//! Arens extensions: bar-lift composition, the adjoint chain, iterated
//! limits, and the identity checks built on them.

pub mod checks;
pub mod dg;
pub mod extend;
pub mod grid;
pub mod star;

pub use checks::*;
pub use dg::{davie_gamelin_eval, davie_gamelin_value, DgValue, DEFAULT_CAP};
pub use extend::{arens_extend, bar_lift, reconstruct, ExtendedOp, Extension};
pub use grid::{dual_generators, generator_tuples, hom_functionals, sign_templates, slot_generators, GRID_EXTENT};
pub use star::{star_chain, StarChain};
