//! Geometric phases of two-level systems and their classical circuit analogs.
//!
//! Complex 2×2 Hamiltonians (hermitian, uniformly decaying and PT-symmetric
//! gain/loss dimers) are propagated directly, as real four-dimensional
//! systems, or as pairs of coupled second-order oscillators. Berry, dynamic
//! and Hannay phases come both in closed form and from trajectories, and
//! gyrator-coupled LC circuits expose the same physics as a precessing
//! oscillation pattern whose spectrum has an exceptional point.
//!
//! The `examples/` directory has one runnable program per capability.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuits;
pub mod cli;
pub mod decomplexify;
pub mod error;
pub mod evolution;
pub mod export;
pub mod linalg;
pub mod models;
pub mod phases;
pub mod selfcheck;

pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix2, ComplexVector2};
