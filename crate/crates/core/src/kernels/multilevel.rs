//! Kernel dispatch by kind, sparse products, and multilevel nesting.
//!
//! A multilevel matrix is `Σ_p d_p · U¹_{p₁} ⊗ U²_{p₂} ⊗ …`. Running the
//! outer level's kernel with vector-valued scalars (one block of inner
//! parameters per outer parameter, one block of x per outer index) turns
//! each outer product into an inner structured matvec, so the counts
//! multiply.

use super::circulant::f_circulant_with;
use super::engine::{Bilinear, ScalarProduct};
use super::symmetric::{skew_symmetric_with, symmetric_with};
use super::toeplitz::{hankel_with, toeplitz_with, tph_with, triangular_toeplitz_with};
use crate::arith::{CountContext, Linear, TrackedScalar};
use crate::error::{Error, Result};
use crate::structures::{param_count, Kind, Level, SparsityPattern, StructuredMatrix};
use num_complex::Complex64;

/// One product per pattern entry.
pub fn sparse_with<B: Bilinear>(
    engine: &B,
    pattern: &SparsityPattern,
    values: &[B::Left],
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    if x.len() != pattern.cols() || values.len() != pattern.len() {
        return Err(Error::DimensionMismatch(format!(
            "sparse pattern {}x{} with {} entries applied to {} values and a vector of {}",
            pattern.rows(),
            pattern.cols(),
            pattern.len(),
            values.len(),
            x.len()
        )));
    }
    let mut out = vec![engine.zero_out(); pattern.rows()];
    for (&(i, j), v) in pattern.entries().iter().zip(values) {
        let p = engine.product(v, &x[j], ctx)?;
        out[i] = out[i].add(&p, ctx);
    }
    Ok(out)
}

/// Fast kernel for any single-level kind.
pub fn structured_with<B: Bilinear>(
    engine: &B,
    kind: &Kind,
    n: usize,
    params: &[B::Left],
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let expected = param_count(kind, n);
    if params.len() != expected {
        return Err(Error::DataLength { kind: kind.name().to_string(), expected, got: params.len() });
    }
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix has order {n} but the vector has {} entries",
            x.len()
        )));
    }
    match kind {
        Kind::Circulant => f_circulant_with(engine, params, Complex64::new(1.0, 0.0), x, ctx),
        Kind::FCirculant { f } => f_circulant_with(engine, params, *f, x, ctx),
        Kind::Toeplitz => toeplitz_with(engine, params, x, ctx),
        Kind::Hankel => hankel_with(engine, params, x, ctx),
        Kind::UpperTriangularToeplitz => triangular_toeplitz_with(engine, params, x, ctx),
        Kind::ToeplitzPlusHankel => {
            let (t, h) = params.split_at(2 * n - 1);
            tph_with(engine, t, h, x, ctx)
        }
        Kind::Symmetric => symmetric_with(engine, params, x, ctx),
        Kind::SkewSymmetric => skew_symmetric_with(engine, params, x, ctx),
        Kind::Sparse(pattern) => sparse_with(engine, pattern, params, x, ctx),
        Kind::Multilevel(_) => Err(Error::Unsupported(
            "multilevel matrices need scalar parameters; use multilevel_matvec".into(),
        )),
    }
}

/// A vector treated as a single scalar of an outer kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Block(pub Vec<TrackedScalar>);

impl Linear for Block {
    fn zero_like(&self) -> Self {
        Block(vec![TrackedScalar::zero(); self.0.len()])
    }

    fn add(&self, other: &Self, ctx: &mut CountContext) -> Self {
        Block(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b, ctx)).collect())
    }

    fn sub(&self, other: &Self, ctx: &mut CountContext) -> Self {
        Block(self.0.iter().zip(&other.0).map(|(a, b)| a.sub(b, ctx)).collect())
    }

    fn neg(&self) -> Self {
        Block(self.0.iter().map(|a| a.neg()).collect())
    }

    fn scale(&self, c: Complex64, ctx: &mut CountContext) -> Self {
        Block(self.0.iter().map(|a| a.scale(c, ctx)).collect())
    }
}

/// Product of an inner parameter block with an inner vector block: the
/// inner multilevel matvec.
#[derive(Debug, Clone)]
pub struct BlockProduct<'a> {
    levels: &'a [Level],
    order: usize,
}

impl<'a> BlockProduct<'a> {
    pub fn new(levels: &'a [Level]) -> Self {
        Self { levels, order: levels.iter().map(|l| l.n).product() }
    }
}

impl Bilinear for BlockProduct<'_> {
    type Left = Block;
    type Right = Block;
    type Out = Block;

    fn product(&self, a: &Block, b: &Block, ctx: &mut CountContext) -> Result<Block> {
        Ok(Block(apply_levels(self.levels, &a.0, &b.0, ctx)?))
    }

    fn zero_out(&self) -> Block {
        Block(vec![TrackedScalar::zero(); self.order])
    }
}

fn apply_levels(levels: &[Level], data: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    let outer = &levels[0];
    if !outer.kind.allowed_as_level() {
        return Err(Error::Unsupported(format!("{} cannot be a multilevel level", outer.kind.name())));
    }
    if levels.len() == 1 {
        return structured_with(&ScalarProduct, &outer.kind, outer.n, data, x, ctx);
    }
    let inner = &levels[1..];
    let inner_params: usize = inner.iter().map(Level::param_count).product();
    let inner_n: usize = inner.iter().map(|l| l.n).product();
    if data.len() != outer.param_count() * inner_params || x.len() != outer.n * inner_n {
        return Err(Error::DimensionMismatch("multilevel data or vector has the wrong length".into()));
    }
    let left: Vec<Block> = data.chunks(inner_params).map(|c| Block(c.to_vec())).collect();
    let right: Vec<Block> = x.chunks(inner_n).map(|c| Block(c.to_vec())).collect();
    let out = structured_with(&BlockProduct::new(inner), &outer.kind, outer.n, &left, &right, ctx)?;
    Ok(out.into_iter().flat_map(|b| b.0).collect())
}

/// Multilevel matvec; the count is the product of the level counts.
pub fn multilevel_matvec(m: &StructuredMatrix, x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    match m.kind() {
        Kind::Multilevel(levels) => {
            if x.len() != m.n() {
                return Err(Error::DimensionMismatch(format!(
                    "matrix has order {} but the vector has {} entries",
                    m.n(),
                    x.len()
                )));
            }
            apply_levels(levels, m.data(), x, ctx)
        }
        other => Err(Error::Unsupported(format!("{} is not multilevel", other.name()))),
    }
}
