//! Two 2×2 products from one algebra multiplication, eight products each.
//!
//! With `A = [[a,b],[c,d]]` and `B = [[e,f],[g,h]]`:
//!
//! * `d4_simultaneous` embeds `Â = d + a·x² + b·y + c·x²y` and
//!   `B̂ = h + e·x³ + f·x²y + g·x³y` in `ℂ[D₄]` and multiplies in Wedderburn
//!   coordinates (four characters, plus a diagonal-times-full 2×2 block).
//!   It returns `AB` and `AB^f`, where `B^f` has its rows swapped.
//! * `x8_simultaneous` embeds `Â = d + bx + cx² + ax³` and
//!   `B̂ = f + hx² + ex⁴ + gx⁶` in `ℂ[x]/(x⁸ − 1)` and multiplies through a
//!   size-8 DFT. It returns `AB` and `AB^g`, where `B^g = [[h,g],[e,f]]`.

use super::{d4_forward, d4_inverse, D4Blocks};
use crate::arith::{self, CountContext, TrackedScalar};
use crate::error::{Error, Result};
use crate::kernels::Matrix2;
use crate::spectral;

/// Row-major `2 × 2n` block of scalars.
pub type Rows = Vec<Vec<TrackedScalar>>;

/// Coefficient indices of `AB` and `AB^f` in the `D₄` product.
pub const D4_AB: [[usize; 2]; 2] = [[1, 4], [7, 0]];
pub const D4_AB_F: [[usize; 2]; 2] = [[5, 2], [3, 6]];
/// Coefficient indices of `AB` and `AB^g` in the `x⁸ − 1` product.
pub const X8_AB: [[usize; 2]; 2] = [[7, 3], [6, 2]];
pub const X8_AB_G: [[usize; 2]; 2] = [[5, 1], [4, 0]];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    F,
    G,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(Variant::F),
            "g" => Ok(Variant::G),
            other => Err(Error::Unsupported(format!("unknown variant \"{other}\" (expected f or g)"))),
        }
    }
}

fn read(u: &[TrackedScalar], at: &[[usize; 2]; 2]) -> Matrix2 {
    at.map(|row| row.map(|k| u[k]))
}

fn product_d4(a: &Matrix2, b: &Matrix2, ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    let z = TrackedScalar::zero();
    let [[a_, b_], [c_, d_]] = *a;
    let [[e_, f_], [g_, h_]] = *b;
    let ah = [d_, z, a_, z, b_, z, c_, z];
    let bh = [h_, z, z, e_, z, z, f_, g_];
    let pa = d4_forward(&ah, ctx)?;
    let pb = d4_forward(&bh, ctx)?;
    // Â's block is diagonal, so the block product costs four.
    let qa = [pa.block[0][0], pa.block[1][1]];
    let block = [0, 1].map(|r| [0, 1].map(|c| arith::mul(qa[r], pb.block[r][c], ctx)));
    let chars = [0, 1, 2, 3].map(|k| arith::mul(pa.chars[k], pb.chars[k], ctx));
    Ok(d4_inverse(&D4Blocks { chars, block }, ctx))
}

/// `(AB, AB^f)` with eight products.
pub fn d4_simultaneous(a: &Matrix2, b: &Matrix2, ctx: &mut CountContext) -> Result<(Matrix2, Matrix2)> {
    let u = product_d4(a, b, ctx)?;
    Ok((read(&u, &D4_AB), read(&u, &D4_AB_F)))
}

fn product_x8(a: &Matrix2, b: &Matrix2, ctx: &mut CountContext) -> Vec<TrackedScalar> {
    let z = TrackedScalar::zero();
    let [[a_, b_], [c_, d_]] = *a;
    let [[e_, f_], [g_, h_]] = *b;
    let ah = [d_, b_, c_, a_, z, z, z, z];
    let bh = [f_, z, h_, z, e_, z, g_, z];
    let fa = spectral::dft(&ah, ctx);
    let fb = spectral::dft(&bh, ctx);
    let prod: Vec<TrackedScalar> = fa.iter().zip(&fb).map(|(x, y)| arith::mul(*x, *y, ctx)).collect();
    spectral::idft(&prod, ctx)
}

/// `(AB, AB^g)` with eight products.
pub fn x8_simultaneous(a: &Matrix2, b: &Matrix2, ctx: &mut CountContext) -> Result<(Matrix2, Matrix2)> {
    let u = product_x8(a, b, ctx);
    Ok((read(&u, &X8_AB), read(&u, &X8_AB_G)))
}

/// `B` is 2×2n. Each column pair goes through a 2×2 kernel, so the count is
/// 8n. Variant `f` swaps the rows of B; variant `g` additionally swaps the
/// first-row entries within column pairs `1..=⌊n/2⌋` (one-based) and leaves
/// the remaining pairs row-swapped only.
pub fn blocked_simultaneous(
    a: &Matrix2,
    b: &[Vec<TrackedScalar>],
    variant: Variant,
    ctx: &mut CountContext,
) -> Result<(Rows, Rows)> {
    let cols = b.first().map_or(0, Vec::len);
    if b.len() != 2 || b[1].len() != cols || cols == 0 || !cols.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "B must be 2 x 2n with n >= 1, got {} rows of {} columns",
            b.len(),
            cols
        )));
    }
    let n = cols / 2;
    let mut ab = vec![Vec::with_capacity(cols), Vec::with_capacity(cols)];
    let mut other = vec![Vec::with_capacity(cols), Vec::with_capacity(cols)];
    for p in 0..n {
        let block: Matrix2 = [[b[0][2 * p], b[0][2 * p + 1]], [b[1][2 * p], b[1][2 * p + 1]]];
        let (x, y) = match variant {
            Variant::G if p < n / 2 => x8_simultaneous(a, &block, ctx)?,
            _ => d4_simultaneous(a, &block, ctx)?,
        };
        for r in 0..2 {
            ab[r].extend_from_slice(&x[r]);
            other[r].extend_from_slice(&y[r]);
        }
    }
    Ok((ab, other))
}

/// Row swap.
pub fn flip_f(b: &Matrix2) -> Matrix2 {
    [b[1], b[0]]
}

/// Row swap, then swap the two entries of the new first row.
pub fn flip_g(b: &Matrix2) -> Matrix2 {
    [[b[1][1], b[1][0]], b[0]]
}

/// The column-pair transform `blocked_simultaneous` applies to B.
pub fn blocked_flip(b: &[Vec<TrackedScalar>], variant: Variant) -> Vec<Vec<TrackedScalar>> {
    let n = b[0].len() / 2;
    let mut out = vec![Vec::new(), Vec::new()];
    for p in 0..n {
        let block: Matrix2 = [[b[0][2 * p], b[0][2 * p + 1]], [b[1][2 * p], b[1][2 * p + 1]]];
        let f = match variant {
            Variant::G if p < n / 2 => flip_g(&block),
            _ => flip_f(&block),
        };
        for r in 0..2 {
            out[r].extend_from_slice(&f[r]);
        }
    }
    out
}
