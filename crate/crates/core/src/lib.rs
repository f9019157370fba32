//! Minimum-multiplication kernels for structured matrix-vector products.
//!
//! Arithmetic runs on [`arith::TrackedScalar`]s so that every kernel reports
//! how many variable-by-variable products it spent. The [`tensor`] module
//! builds the matching structure tensors and checks decompositions and rank
//! bounds; [`group`] covers group-algebra matrix multiplication and the
//! eight-product simultaneous 2×2 kernels.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod error;
pub mod group;
pub mod harness;
pub mod kernels;
pub mod spectral;
pub mod structures;
pub mod suite;
pub mod tensor;

pub use error::{Error, Result};
