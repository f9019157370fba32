//! Symmetric (Hankel peeling) and skew-symmetric kernels.

use num_complex::Complex64;

use super::circulant::f_circulant_with;
use super::engine::{Bilinear, ScalarProduct};
use super::toeplitz::hankel_with;
use crate::arith::{combine_or_zero, CountContext, Linear, TrackedScalar};
use crate::error::{Error, Result};
use crate::structures::{strict_upper_index, upper_index};

fn check_params(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DataLength { kind: what.to_string(), expected, got });
    }
    Ok(())
}

/// Symmetric matvec with `n(n+1)/2` products.
///
/// Peels `H = Hank(first row ∥ last column)` off the current block, leaving
/// a symmetric block of order `m − 2` bordered by zeros. Block orders run
/// `n, n−2, …` and stop at 2 or 1; a stage of order m costs `2m − 1`.
pub fn symmetric_with<B: Bilinear>(engine: &B, s: &[B::Left], x: &[B::Right], ctx: &mut CountContext) -> Result<Vec<B::Out>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    check_params("symmetric", n * (n + 1) / 2, s.len())?;

    // Working copy of the upper triangle, a[i][j] for i ≤ j.
    let mut a: Vec<Vec<B::Left>> = (0..n)
        .map(|i| (i..n).map(|j| s[upper_index(n, i, j)].clone()).collect())
        .collect();
    let at = |a: &Vec<Vec<B::Left>>, i: usize, j: usize| a[i][j - i].clone();

    let mut out: Vec<B::Out> = vec![engine.zero_out(); n];
    let (mut lo, mut m) = (0usize, n);
    loop {
        let mut h: Vec<B::Left> = (0..m).map(|k| at(&a, lo, lo + k)).collect();
        h.extend((1..m).map(|i| at(&a, lo + i, lo + m - 1)));
        let y = hankel_with(engine, &h, &x[lo..lo + m], ctx)?;
        for (i, yi) in y.iter().enumerate() {
            out[lo + i] = out[lo + i].add(yi, ctx);
        }
        if m < 3 {
            break;
        }
        for i in 1..m - 1 {
            for j in i..m - 1 {
                let v = a[lo + i][j - i].sub(&h[i + j], ctx);
                a[lo + i][j - i] = v;
            }
        }
        lo += 1;
        m -= 2;
    }
    Ok(out)
}

/// Skew-symmetric matvec with `n² − n − ⌈(n−1)/2⌉ + 1` products (n ≥ 2).
///
/// `A = A_c + A_w`: `A_c` is the skew-circulant (f = −1) sharing A's first
/// row and costs n. `A_w` has a zero first row and diagonal; its first
/// column satisfies `A_w(r,0) = −A_w(n−r,0)`, so one product serves each
/// pair `{r, n−r}` and the self-paired `r = n/2` entry is zero. The
/// remaining off-diagonal entries cost one product each.
pub fn skew_symmetric_with<B: Bilinear>(
    engine: &B,
    w: &[B::Left],
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    check_params("skew_symmetric", n * (n - 1) / 2, w.len())?;
    if n == 1 {
        return Ok(vec![engine.zero_out()]);
    }
    let params = w.len();
    let one = Complex64::new(1.0, 0.0);
    let unit = |p: usize, sign: f64| {
        let mut row = vec![Complex64::new(0.0, 0.0); params];
        row[p] = one * sign;
        row
    };
    // Coefficients of A(r, s) over the parameters.
    let entry = |r: usize, s: usize| -> Vec<Complex64> {
        match r.cmp(&s) {
            std::cmp::Ordering::Less => unit(strict_upper_index(n, r, s), 1.0),
            std::cmp::Ordering::Greater => unit(strict_upper_index(n, s, r), -1.0),
            std::cmp::Ordering::Equal => vec![Complex64::new(0.0, 0.0); params],
        }
    };
    // c_k = a_{0,k}, c_0 = 0; A_c(r, s) = c_{s−r} if s ≥ r else −c_{n+s−r}.
    let circ_entry = |r: usize, s: usize| -> Vec<Complex64> {
        let (k, sign) = if s >= r { (s - r, 1.0) } else { (n + s - r, -1.0) };
        if k == 0 {
            vec![Complex64::new(0.0, 0.0); params]
        } else {
            unit(strict_upper_index(n, 0, k), sign)
        }
    };
    let residual = |r: usize, s: usize| -> Vec<Complex64> {
        entry(r, s).iter().zip(circ_entry(r, s)).map(|(a, b)| a - b).collect()
    };

    let zero_left = w[0].zero_like();
    let mut first_row = vec![zero_left];
    first_row.extend((1..n).map(|k| w[strict_upper_index(n, 0, k)].clone()));
    let mut out = f_circulant_with(engine, &first_row, Complex64::new(-1.0, 0.0), x, ctx)?;

    // First column of A_w, paired r ↔ n − r.
    for r in 1..n {
        let partner = n - r;
        if r >= partner {
            continue;
        }
        let coeff = combine_or_zero(&residual(r, 0), w, ctx);
        let p = engine.product(&coeff, &x[0], ctx)?;
        out[r] = out[r].add(&p, ctx);
        out[partner] = out[partner].sub(&p, ctx);
    }
    // Interior of A_w.
    for r in 1..n {
        for s in 1..n {
            if r == s {
                continue;
            }
            let coeff = combine_or_zero(&residual(r, s), w, ctx);
            let p = engine.product(&coeff, &x[s], ctx)?;
            out[r] = out[r].add(&p, ctx);
        }
    }
    Ok(out)
}

pub fn symmetric_matvec(s: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    symmetric_with(&ScalarProduct, s, x, ctx)
}

pub fn skew_symmetric_matvec(w: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    skew_symmetric_with(&ScalarProduct, w, x, ctx)
}
