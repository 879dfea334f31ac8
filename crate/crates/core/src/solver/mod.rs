//! Double-precision root finding and polynomial system solving.

pub mod poly;
pub mod resultant;
pub mod system;

pub use poly::{cluster_roots, univariate_roots, ComplexPoly};
pub use resultant::{resultant_eliminate, sylvester_det, BiComplexPoly, Var};
pub use system::{solve_system, solve_system_order, SolutionSet, SolverConfig};
