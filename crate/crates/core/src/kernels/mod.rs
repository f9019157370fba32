//! Minimum-multiplication kernels.
//!
//! Each kernel is generic over a [`engine::Bilinear`] engine; the plain
//! `*_matvec` functions run it with counted scalar arithmetic.

pub mod circulant;
pub mod decompose;
pub mod engine;
pub mod formula;
pub mod multilevel;
pub mod small;
pub mod symmetric;
pub mod toeplitz;

pub use circulant::{
    circulant_inverse, circulant_matvec, f_circulant_inverse, f_circulant_matvec, gauss_complex_mul,
};
pub use decompose::{extract_decomposition, extract_tph_reduced};
pub use formula::{formula_count, skew_symmetric_count, toeplitz_matmul_count};
pub use multilevel::multilevel_matvec;
pub use small::{commutator_2x2, Matrix2};
pub use symmetric::{skew_symmetric_matvec, symmetric_matvec};
pub use toeplitz::{
    hankel_matvec, toeplitz_matmul, toeplitz_matvec, tph_matvec, tph_reduced_count, tph_reduced_matvec,
    triangular_toeplitz_matvec,
};

use crate::arith::{CountContext, Counts, TrackedScalar};
use crate::error::Result;
use crate::structures::{Kind, StructuredMatrix};

/// Output of a fast kernel run with its counters and the closed-form count.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelReport {
    pub output: Vec<TrackedScalar>,
    pub counts: Counts,
    pub formula_count: u64,
}

impl KernelReport {
    pub fn count_matches(&self) -> bool {
        self.counts.bilinear_mults == self.formula_count
    }
}

/// Runs the fast kernel for `m` on `x` in a fresh context.
pub fn fast_matvec(m: &StructuredMatrix, x: &[TrackedScalar]) -> Result<KernelReport> {
    let mut ctx = CountContext::new();
    let output = match m.kind() {
        Kind::Multilevel(_) => multilevel_matvec(m, x, &mut ctx)?,
        kind => multilevel::structured_with(&engine::ScalarProduct, kind, m.n(), m.data(), x, &mut ctx)?,
    };
    Ok(KernelReport { output, counts: ctx.snapshot(), formula_count: formula_count(m.kind(), m.n()) })
}
