//! Regular multilinear operators and the forms `y' ∘ A` they induce.

pub mod catalog;
pub mod compose;
pub mod form;
pub mod multi;
pub mod perm;
pub mod reduce;
pub mod registry;
pub mod repr;
pub mod tensor;

pub use catalog::{CoordProduct, FiniteRankProduct, UpperTriangular, WeightedDiagonal};
pub use compose::{compose_hom, Combination, HomComposite, LatticeMap};
pub use form::{Form, FormSlot, Idx};
pub use perm::Permutation;
pub use repr::{OperatorRepr, RegOperator, RuleVerdict};
pub use tensor::{index_tuples, TensorOp};
pub use multi::{is_multimorphism, is_positive_op, kusraev_factor, multimorphism_holds, tensor_of_factors, CertMethod, Certificate, MultiVerdict};
pub use reduce::{finite_rank_reduce, Reduction, CLOSURE_ROUNDS};
pub use registry::{Context, OperatorBuilder, OperatorRegistry};
