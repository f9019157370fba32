//! Toeplitz, Hankel, triangular Toeplitz and Toeplitz-plus-Hankel kernels.
//!
//! The n×n Toeplitz matrix sits in the top-left corner of the 2n×2n
//! circulant with first row `(t_0, …, t_{n-1}, y, t_{-(n-1)}, …, t_{-1})`.
//! With `y = −Σ t` the row sums to zero, so the frequency-0 eigenvalue
//! vanishes identically and that product is never formed.

use num_complex::Complex64;

use super::engine::{Bilinear, ScalarProduct};
use crate::arith::{combine_or_zero, CountContext, Linear, TrackedScalar};
use crate::error::{Error, Result};
use crate::spectral::{apply, RootTable};

fn order_from_diagonals(len: usize) -> Result<usize> {
    if len == 0 || len.is_multiple_of(2) {
        return Err(Error::DimensionMismatch(format!(
            "expected 2n-1 diagonal parameters, got {len}"
        )));
    }
    Ok(len.div_ceil(2))
}

fn check_vector(n: usize, x_len: usize) -> Result<()> {
    if n != x_len {
        return Err(Error::DimensionMismatch(format!(
            "matrix has order {n} but the vector has {x_len} entries"
        )));
    }
    Ok(())
}

/// Position of `t_k` (parameter index `k + n − 1`) in the embedded first row.
fn embedded_position(k: i64, n: usize) -> i64 {
    if k >= 0 {
        k
    } else {
        2 * n as i64 + k
    }
}

/// Row of coefficients expressing the frequency-m eigenvalue of the
/// embedding as a combination of the Toeplitz parameters (y eliminated).
fn eigen_row(n: usize, m: usize, roots: &RootTable) -> Vec<Complex64> {
    let y_twiddle = roots.pow((n * m) as i64);
    (0..2 * n - 1)
        .map(|p| {
            let k = p as i64 - (n as i64 - 1);
            roots.pow(embedded_position(k, n) * m as i64) - y_twiddle
        })
        .collect()
}

/// Toeplitz matvec through the 2n circulant, forming products only for
/// frequencies outside `skipped`. Frequency 0 must always be skipped; any
/// other skipped frequency must have an eigenvalue the caller made zero.
fn toeplitz_embedded<B: Bilinear>(
    engine: &B,
    t: &[B::Left],
    x: &[B::Right],
    skipped: &[usize],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let n = order_from_diagonals(t.len())?;
    check_vector(n, x.len())?;
    let size = 2 * n;
    let roots = RootTable::new(size);
    let inv = 1.0 / size as f64;
    let freqs: Vec<usize> = (0..size).filter(|m| !skipped.contains(m)).collect();

    let eig_rows: Vec<Vec<Complex64>> = freqs.iter().map(|&m| eigen_row(n, m, &roots)).collect();
    let eig = apply(&eig_rows, t, ctx);
    // α = idft((x, 0)) restricted to the used frequencies.
    let mode_rows: Vec<Vec<Complex64>> = freqs
        .iter()
        .map(|&m| (0..n).map(|j| roots.pow(-((j * m) as i64)) * inv).collect())
        .collect();
    let alpha = apply(&mode_rows, x, ctx);
    let products = eig
        .iter()
        .zip(&alpha)
        .map(|(e, a)| engine.product(e, a, ctx))
        .collect::<Result<Vec<_>>>()?;
    if products.is_empty() {
        return Ok(vec![engine.zero_out(); n]);
    }
    let out_rows: Vec<Vec<Complex64>> = (0..n)
        .map(|i| freqs.iter().map(|&m| roots.pow((i * m) as i64)).collect())
        .collect();
    Ok(out_rows
        .iter()
        .map(|row| combine_or_zero(row, &products, ctx))
        .collect())
}

pub fn toeplitz_with<B: Bilinear>(engine: &B, t: &[B::Left], x: &[B::Right], ctx: &mut CountContext) -> Result<Vec<B::Out>> {
    toeplitz_embedded(engine, t, x, &[0], ctx)
}

/// `H·x = J·T·x` where T is the Toeplitz matrix with the same parameter
/// vector (`t_k = h_{n-1+k}`).
pub fn hankel_with<B: Bilinear>(engine: &B, h: &[B::Left], x: &[B::Right], ctx: &mut CountContext) -> Result<Vec<B::Out>> {
    let mut out = toeplitz_with(engine, h, x, ctx)?;
    out.reverse();
    Ok(out)
}

/// Upper-triangular Toeplitz product as polynomial multiplication:
/// `Â = Σ a_i x^i`, `v̂ = Σ v_i x^{n-1-i}`, cyclic convolution of length
/// `2n − 1`; output r is the coefficient of `x^{n-1-r}`.
pub fn triangular_toeplitz_with<B: Bilinear>(
    engine: &B,
    a: &[B::Left],
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let n = a.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    check_vector(n, x.len())?;
    let size = 2 * n - 1;
    let roots = RootTable::new(size);
    let a_rows: Vec<Vec<Complex64>> = (0..size)
        .map(|m| (0..n).map(|i| roots.pow((i * m) as i64)).collect())
        .collect();
    let v_rows: Vec<Vec<Complex64>> = (0..size)
        .map(|m| (0..n).map(|i| roots.pow(((n - 1 - i) * m) as i64)).collect())
        .collect();
    let ea = apply(&a_rows, a, ctx);
    let ev = apply(&v_rows, x, ctx);
    let products = ea
        .iter()
        .zip(&ev)
        .map(|(p, q)| engine.product(p, q, ctx))
        .collect::<Result<Vec<_>>>()?;
    let inv = 1.0 / size as f64;
    let out_rows: Vec<Vec<Complex64>> = (0..n)
        .map(|r| {
            let k = (n - 1 - r) as i64;
            (0..size).map(|m| roots.pow(-k * m as i64) * inv).collect()
        })
        .collect();
    Ok(apply(&out_rows, &products, ctx))
}

/// `Σ_{k≠n} ω^k − (2n−1)ω^n` for `ω = exp(2πi/2n)`: the coefficient of the
/// shift `a` in the frequency-1 eigenvalue of the embedding of `T + aE`.
pub fn tph_shift_coefficient(n: usize) -> Complex64 {
    let roots = RootTable::new(2 * n);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..2 * n {
        if k != n {
            sum += roots.pow(k as i64);
        }
    }
    sum - roots.pow(n as i64) * (2 * n - 1) as f64
}

fn check_shift_coefficient(n: usize) -> Result<()> {
    let got = tph_shift_coefficient(n);
    let expected = Complex64::new(2.0 * n as f64, 0.0);
    if (got - expected).norm() > 1e-9 {
        return Err(Error::SelfCheck(format!(
            "shift coefficient at n = {n} is {got}, expected {expected}"
        )));
    }
    Ok(())
}

/// `(T + H)·x` with `4n − 3` products. The shift `a = −ĉ₁/(2n)` makes the
/// frequency-1 eigenvalue of `T + aE` vanish (`E` is the all-ones matrix),
/// so that part costs `2n − 2`; `H − aE` goes through the Hankel kernel.
pub fn tph_with<B: Bilinear>(
    engine: &B,
    t: &[B::Left],
    h: &[B::Left],
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let n = order_from_diagonals(t.len())?;
    if h.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "Toeplitz part has {} parameters but Hankel part has {}",
            t.len(),
            h.len()
        )));
    }
    check_vector(n, x.len())?;
    check_shift_coefficient(n)?;

    let roots = RootTable::new(2 * n);
    let scale = -1.0 / (2.0 * n as f64);
    let a_row: Vec<Complex64> = eigen_row(n, 1, &roots).into_iter().map(|z| z * scale).collect();
    let a = combine_or_zero(&a_row, t, ctx);
    let shifted_t: Vec<B::Left> = t.iter().map(|tk| tk.add(&a, ctx)).collect();
    let shifted_h: Vec<B::Left> = h.iter().map(|hk| hk.sub(&a, ctx)).collect();

    let tx = toeplitz_embedded(engine, &shifted_t, x, &[0, 1], ctx)?;
    let hx = hankel_with(engine, &shifted_h, x, ctx)?;
    Ok(tx.iter().zip(&hx).map(|(p, q)| p.add(q, ctx)).collect())
}

/// Products spent by [`tph_reduced_with`]: `4n − 4` for `n ≥ 2`.
pub fn tph_reduced_count(n: usize) -> u64 {
    crate::structures::tph_dimension(n) as u64
}

/// `(T + H)·x` with `4n − 4` products for `n ≥ 2`. Besides the all-ones
/// matrix `E`, the checkerboard `C = ((−1)^{i+j})` is both Toeplitz and
/// Hankel. Its embedding has a single nonzero eigenvalue `2n` at frequency
/// n, so after the shift `a` clears frequency 1 a second shift `b` clears
/// frequency n of `T + aE + bC`; `H − aE − bC` goes through the Hankel kernel.
pub fn tph_reduced_with<B: Bilinear>(
    engine: &B,
    t: &[B::Left],
    h: &[B::Left],
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let n = order_from_diagonals(t.len())?;
    if n == 1 {
        return tph_with(engine, t, h, x, ctx);
    }
    if h.len() != t.len() {
        return Err(Error::DimensionMismatch(format!(
            "Toeplitz part has {} parameters but Hankel part has {}",
            t.len(),
            h.len()
        )));
    }
    check_vector(n, x.len())?;
    check_shift_coefficient(n)?;

    let roots = RootTable::new(2 * n);
    let sign: Vec<f64> = (0..2 * n - 1).map(|p| if (p + n - 1) % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let row1 = eigen_row(n, 1, &roots);
    let row_n = eigen_row(n, n, &roots);
    let on_sign = |row: &[Complex64]| -> Complex64 { row.iter().zip(&sign).map(|(z, s)| z * s).sum() };
    let (c1, cn) = (on_sign(&row1), on_sign(&row_n));
    let en: Complex64 = row_n.iter().sum();
    let two_n = 2.0 * n as f64;
    if c1.norm() > 1e-9 || (cn - two_n).norm() > 1e-9 {
        return Err(Error::SelfCheck(format!(
            "checkerboard eigenvalues at n = {n}: frequency 1 {c1}, frequency n {cn}"
        )));
    }

    let a_row: Vec<Complex64> = row1.iter().map(|z| z * (-1.0 / two_n)).collect();
    let b_row: Vec<Complex64> = row_n.iter().zip(&a_row).map(|(r, a)| -(r + en * a) / cn).collect();
    let a = combine_or_zero(&a_row, t, ctx);
    let b = combine_or_zero(&b_row, t, ctx);
    let even = a.add(&b, ctx);
    let odd = a.sub(&b, ctx);
    let shift = |p: usize| if sign[p] > 0.0 { &even } else { &odd };
    let shifted_t: Vec<B::Left> = t.iter().enumerate().map(|(p, tk)| tk.add(shift(p), ctx)).collect();
    // Hankel index s has parity (−1)^s; the Toeplitz sign vector is offset by n − 1.
    let shifted_h: Vec<B::Left> = h
        .iter()
        .enumerate()
        .map(|(s, hs)| hs.sub(if s % 2 == 0 { &even } else { &odd }, ctx))
        .collect();

    let tx = toeplitz_embedded(engine, &shifted_t, x, &[0, 1, n], ctx)?;
    let hx = hankel_with(engine, &shifted_h, x, ctx)?;
    Ok(tx.iter().zip(&hx).map(|(p, q)| p.add(q, ctx)).collect())
}

pub fn tph_reduced_matvec(
    t: &[TrackedScalar],
    h: &[TrackedScalar],
    x: &[TrackedScalar],
    ctx: &mut CountContext,
) -> Result<Vec<TrackedScalar>> {
    tph_reduced_with(&ScalarProduct, t, h, x, ctx)
}

pub fn toeplitz_matvec(t: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    toeplitz_with(&ScalarProduct, t, x, ctx)
}

pub fn hankel_matvec(h: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    hankel_with(&ScalarProduct, h, x, ctx)
}

pub fn triangular_toeplitz_matvec(a: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    triangular_toeplitz_with(&ScalarProduct, a, x, ctx)
}

pub fn tph_matvec(t: &[TrackedScalar], h: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    tph_with(&ScalarProduct, t, h, x, ctx)
}

/// `T·Y` column by column; `y` is row-major n×n. Costs `n(2n − 1)`.
pub fn toeplitz_matmul(t: &[TrackedScalar], y: &[Vec<TrackedScalar>], ctx: &mut CountContext) -> Result<Vec<Vec<TrackedScalar>>> {
    let n = order_from_diagonals(t.len())?;
    if y.len() != n || y.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!("expected a {n}x{n} right factor")));
    }
    let mut out = vec![vec![TrackedScalar::zero(); n]; n];
    for j in 0..n {
        let col: Vec<TrackedScalar> = y.iter().map(|row| row[j]).collect();
        let prod = toeplitz_matvec(t, &col, ctx)?;
        for (i, v) in prod.into_iter().enumerate() {
            out[i][j] = v;
        }
    }
    Ok(out)
}
