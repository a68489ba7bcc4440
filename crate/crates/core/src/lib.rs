//! Exact-arithmetic construction and certification of lattice Delone
//! simplices.
//!
//! The crate builds two families of Delone simplices with large relative
//! volume — Hadamard/Construction-A lattice simplices and staircase
//! simplices of perturbed orthogonal products — and certifies the defining
//! empty-sphere property with machine-checkable exact certificates. A
//! companion module tabulates the known lower and upper bounds on the
//! maximum relative volume `mv(d)` and on related triangulation counts.
//!
//! All geometry is decided over arbitrary-precision rationals; no floating
//! point participates in any decision.

// index loops mirror the matrix formulas throughout
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod delone;
pub mod error;
pub mod exact;
pub mod hadamard;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod product;

pub use error::{Error, Result};
pub use exact::{Int, Rat};
pub use matrix::{IntMat, LinearSolution, Mat};
