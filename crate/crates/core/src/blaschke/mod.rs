//! Two-variable Blaschke products, their homogeneous lifts and evaluation.

pub mod eval;
pub mod lift;
pub mod map;
pub mod spec;

pub use eval::{eval_affine, AffineValue, NumericMap, DEFAULT_INDET_TOL};
pub use lift::{factored_lift, lift, lift_budgeted, raw_lift, FactoredMap, HomogeneousMap, LinearForm};
pub use map::{
    build_map, monomial_map, Blaschke2D, DegreeMatrix, Factor, OneVarBlaschke, UnimodularRotation,
};
pub use spec::MapSpec;
