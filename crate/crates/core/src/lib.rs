//! Curvilinear virtual element method for 2D small-deformation solids.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod materials;
pub mod poly;
pub mod quadrature;
pub mod solver;
pub mod spaces;

pub use error::{Error, Result};
pub use exec::Execution;
