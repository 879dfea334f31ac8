pub mod arith;
pub mod blaschke;
pub mod dynamics;
pub mod families;
pub mod geometry;
pub mod solver;
pub mod topology;
pub mod torus;
pub mod error;

pub use error::{Error, ErrorClass, Result};
