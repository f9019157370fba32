//! Rank-one terms induced by a kernel.
//!
//! The kernel runs once with [`TraceProduct`]: parameters and inputs are unit
//! linear forms, each product records its two forms, and the outputs come
//! back as combinations of product indices. Product r contributes
//! `u_r ⊗ v_r ⊗ w_r`, where `w_r[k]` is the coefficient of product r in
//! output k.

use num_complex::Complex64;

use super::engine::{Form, TraceProduct};
use super::multilevel::structured_with;
use super::toeplitz::tph_reduced_with;
use crate::arith::CountContext;
use crate::error::{Error, Result};
use crate::structures::{basis_params, dimension, param_count, tph_dimension, Kind};
use crate::tensor::{Term, TensorDecomposition};

/// Decomposition of the structure tensor of `kind` at order `n`, with the
/// parameter factors expressed on the structure's basis.
pub fn extract_decomposition(kind: &Kind, n: usize) -> Result<TensorDecomposition> {
    if matches!(kind, Kind::Multilevel(_)) {
        return Err(Error::Unsupported("decomposition extraction takes single-level kinds".into()));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    let p = param_count(kind, n);
    let params: Vec<Form> = (0..p).map(|i| Form::unit(i, p)).collect();
    let x: Vec<Form> = (0..n).map(|j| Form::unit(j, n)).collect();
    let engine = TraceProduct::new();
    let out = structured_with(&engine, kind, n, &params, &x, &mut CountContext::new())?;
    assemble(engine, &out, kind, n)
}

/// Decomposition of the Toeplitz-plus-Hankel tensor induced by the
/// `4n − 4` kernel.
pub fn extract_tph_reduced(n: usize) -> Result<TensorDecomposition> {
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    let m = 2 * n - 1;
    let params: Vec<Form> = (0..2 * m).map(|i| Form::unit(i, 2 * m)).collect();
    let x: Vec<Form> = (0..n).map(|j| Form::unit(j, n)).collect();
    let engine = TraceProduct::new();
    let out = tph_reduced_with(&engine, &params[..m], &params[m..], &x, &mut CountContext::new())?;
    debug_assert_eq!(dimension(&Kind::ToeplitzPlusHankel, n), tph_dimension(n));
    assemble(engine, &out, &Kind::ToeplitzPlusHankel, n)
}

fn assemble(engine: TraceProduct, out: &[Form], kind: &Kind, n: usize) -> Result<TensorDecomposition> {
    let recorded = engine.into_terms();
    let basis = basis_params(kind, n);
    let one = Complex64::new(1.0, 0.0);
    let terms = recorded
        .into_iter()
        .enumerate()
        .map(|(r, (u, v))| {
            Term::new(
                one,
                basis.iter().map(|&b| u.coefficient(b)).collect(),
                (0..n).map(|j| v.coefficient(j)).collect(),
                out.iter().map(|o| o.coefficient(r)).collect(),
            )
        })
        .collect();
    TensorDecomposition::new((dimension(kind, n), n, n), terms)
}
