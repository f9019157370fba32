//! Discrete Fourier transforms over [`Linear`] values.
//!
//! All transforms are direct O(n²) sums whose twiddles are constants, so
//! they never touch the bilinear counter. `ω = exp(2πi/n)`,
//! `dft(v)[k] = Σ_j v[j]·ω^{jk}`, `idft(v)[j] = (1/n)·Σ_k v[k]·ω^{-jk}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::{combine_or_zero, CountContext, Linear};
use crate::error::{Error, Result};

/// Powers of the primitive n-th root of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootTable {
    n: usize,
    omega_powers: Vec<Complex64>,
}

impl RootTable {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "root table needs n >= 1");
        let omega_powers = (0..n).map(|k| root_of_unity(k, n)).collect();
        Self { n, omega_powers }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega_powers(&self) -> &[Complex64] {
        &self.omega_powers
    }

    /// `ω^e` for any integer exponent.
    pub fn pow(&self, e: i64) -> Complex64 {
        self.omega_powers[e.rem_euclid(self.n as i64) as usize]
    }
}

/// `exp(2πi·k/n)`, exact at multiples of a quarter turn.
fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// Principal n-th root of `f`: `|f|^{1/n}·exp(i·arg(f)/n)`, `arg ∈ (−π, π]`.
pub fn principal_root(f: Complex64, n: usize) -> Result<Complex64> {
    if f.norm() == 0.0 {
        return Err(Error::ZeroF);
    }
    let mut arg = f.arg();
    if arg <= -PI {
        arg = PI;
    }
    Ok(Complex64::from_polar(f.norm().powf(1.0 / n as f64), arg / n as f64))
}

/// Applies a constant matrix to a vector of linear values.
pub fn apply<L: Linear>(matrix: &[Vec<Complex64>], v: &[L], ctx: &mut CountContext) -> Vec<L> {
    matrix.iter().map(|row| combine_or_zero(row, v, ctx)).collect()
}

/// Rows `ω^{jk}`.
pub fn dft_matrix(n: usize) -> Vec<Vec<Complex64>> {
    let roots = RootTable::new(n);
    (0..n)
        .map(|k| (0..n).map(|j| roots.pow((j * k) as i64)).collect())
        .collect()
}

/// Rows `ω^{-jk}/n`.
pub fn idft_matrix(n: usize) -> Vec<Vec<Complex64>> {
    let roots = RootTable::new(n);
    let inv = 1.0 / n as f64;
    (0..n)
        .map(|j| (0..n).map(|k| roots.pow(-((j * k) as i64)) * inv).collect())
        .collect()
}

/// Rows `(ρω^k)^j`: evaluation at the n roots of `xⁿ = f`.
pub fn scaled_dft_matrix(n: usize, f: Complex64) -> Result<Vec<Vec<Complex64>>> {
    let rho = principal_root(f, n)?;
    let roots = RootTable::new(n);
    Ok((0..n)
        .map(|k| {
            (0..n)
                .map(|j| rho.powu(j as u32) * roots.pow((j * k) as i64))
                .collect()
        })
        .collect())
}

/// Inverse of [`scaled_dft_matrix`]: rows `ρ^{-j}ω^{-jk}/n`.
pub fn scaled_idft_matrix(n: usize, f: Complex64) -> Result<Vec<Vec<Complex64>>> {
    let rho = principal_root(f, n)?;
    let roots = RootTable::new(n);
    let inv = 1.0 / n as f64;
    Ok((0..n)
        .map(|j| {
            let r = rho.powi(-(j as i32)) * inv;
            (0..n).map(|k| r * roots.pow(-((j * k) as i64))).collect()
        })
        .collect())
}

pub fn dft<L: Linear>(v: &[L], ctx: &mut CountContext) -> Vec<L> {
    apply(&dft_matrix(v.len()), v, ctx)
}

pub fn idft<L: Linear>(v: &[L], ctx: &mut CountContext) -> Vec<L> {
    apply(&idft_matrix(v.len()), v, ctx)
}

pub fn scaled_dft<L: Linear>(v: &[L], f: Complex64, ctx: &mut CountContext) -> Result<Vec<L>> {
    Ok(apply(&scaled_dft_matrix(v.len(), f)?, v, ctx))
}

pub fn scaled_idft<L: Linear>(v: &[L], f: Complex64, ctx: &mut CountContext) -> Result<Vec<L>> {
    Ok(apply(&scaled_idft_matrix(v.len(), f)?, v, ctx))
}
