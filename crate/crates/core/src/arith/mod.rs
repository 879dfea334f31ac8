//! Exact arithmetic: Gaussian rationals, homogeneous polynomials in `Z, W, T`
//! and their gcd.

pub mod gaussian;
pub mod gcd;
pub mod intpoly;
pub mod modp;
pub mod modular;
pub mod prs;
pub mod tripoly;
pub mod upoly;

pub use gaussian::{rat, GaussInt, GaussianRational, Rational, GR};
pub use gcd::{gcd_cofactors, gcd_cofactors_int, poly_gcd, GcdCofactors};
pub use intpoly::IntPoly;
pub use prs::poly_gcd_prs;
pub use upoly::UniPoly;
pub use tripoly::{poly_eval, poly_mul, poly_mul_budgeted, Exp, TermBudget, TriPoly};
