//! Exact-arithmetic workbench for Arens extensions of regular multilinear
//! operators on vector lattices.

pub mod arens;
pub mod bidual;
pub mod direct_sum;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod operator;
pub mod rational;
pub mod sample;

pub use error::{Error, Result};
pub use rational::Rational;
