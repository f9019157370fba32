//! Circulant and f-circulant kernels: n products, inverses with n divisions.
//!
//! `FCirc(c, f) = Σ_k c_k Q^k` where `Q` is the shift with wrap-around entry
//! `f`. Its eigenvectors are `(ρω^m)^j` and its eigenvalues are
//! `ĉ_m = scaled_dft(c)[m]`. Writing `x = Σ_m α_m v_m` gives
//! `α_m = (1/n) Σ_j ρ^{-j} ω^{-jm} x_j` and `(FCirc·x)_i = ρ^i Σ_m ĉ_m α_m ω^{im}`.

use num_complex::Complex64;

use super::engine::{Bilinear, ScalarProduct};
use crate::arith::{self, CountContext, TrackedScalar};
use crate::error::{Error, Result};
use crate::spectral::{apply, principal_root, scaled_dft_matrix, scaled_idft, RootTable};

/// Relative threshold below which an eigenvalue counts as zero.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

fn check_len(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch(format!("{what}: expected {expected} entries, got {got}")));
    }
    Ok(())
}

/// Generic f-circulant matvec (f = 1 is the plain circulant).
pub fn f_circulant_with<B: Bilinear>(
    engine: &B,
    c: &[B::Left],
    f: Complex64,
    x: &[B::Right],
    ctx: &mut CountContext,
) -> Result<Vec<B::Out>> {
    let n = c.len();
    check_len("f-circulant input vector", n, x.len())?;
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    let rho = principal_root(f, n)?;
    let roots = RootTable::new(n);
    let inv_n = 1.0 / n as f64;

    let eig = apply(&scaled_dft_matrix(n, f)?, c, ctx);
    let to_modes: Vec<Vec<Complex64>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|j| rho.powi(-(j as i32)) * roots.pow(-((j * m) as i64)) * inv_n)
                .collect()
        })
        .collect();
    let alpha = apply(&to_modes, x, ctx);

    let products = eig
        .iter()
        .zip(&alpha)
        .map(|(e, a)| engine.product(e, a, ctx))
        .collect::<Result<Vec<_>>>()?;

    let from_modes: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|m| rho.powu(i as u32) * roots.pow((i * m) as i64)).collect())
        .collect();
    Ok(apply(&from_modes, &products, ctx))
}

pub fn circulant_with<B: Bilinear>(engine: &B, c: &[B::Left], x: &[B::Right], ctx: &mut CountContext) -> Result<Vec<B::Out>> {
    f_circulant_with(engine, c, Complex64::new(1.0, 0.0), x, ctx)
}

/// `Circ(c)·x` with `n` bilinear multiplications.
pub fn circulant_matvec(c: &[TrackedScalar], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    circulant_with(&ScalarProduct, c, x, ctx)
}

/// `FCirc(c, f)·x` with `n` bilinear multiplications.
pub fn f_circulant_matvec(c: &[TrackedScalar], f: Complex64, x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    f_circulant_with(&ScalarProduct, c, f, x, ctx)
}

/// Parameters (first row) of `FCirc(c, f)⁻¹`, using `n` divisions and no
/// bilinear multiplications.
pub fn f_circulant_inverse(c: &[TrackedScalar], f: Complex64, ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    let n = c.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    let norm = c.iter().map(|x| x.value.norm_sqr()).sum::<f64>().sqrt();
    let eig = apply(&scaled_dft_matrix(n, f)?, c, ctx);
    for (index, e) in eig.iter().enumerate() {
        let magnitude = e.value.norm();
        if magnitude <= SINGULAR_THRESHOLD * norm || norm == 0.0 {
            return Err(Error::Singular { index, magnitude });
        }
    }
    let one = TrackedScalar::real_constant(1.0);
    let recip = eig
        .iter()
        .map(|e| arith::div(one, *e, ctx))
        .collect::<Result<Vec<_>>>()?;
    scaled_idft(&recip, f, ctx)
}

pub fn circulant_inverse(c: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    f_circulant_inverse(c, Complex64::new(1.0, 0.0), ctx)
}

/// `(ac − bd, ad + bc)` from real parts with three multiplications.
pub fn gauss_complex_mul(
    a: TrackedScalar,
    b: TrackedScalar,
    c: TrackedScalar,
    d: TrackedScalar,
    ctx: &mut CountContext,
) -> (TrackedScalar, TrackedScalar) {
    let ab = arith::add(a, b, ctx);
    let cd = arith::add(c, d, ctx);
    let m1 = arith::mul(ab, cd, ctx);
    let m2 = arith::mul(a, c, ctx);
    let m3 = arith::mul(b, d, ctx);
    let re = arith::sub(m2, m3, ctx);
    let im = arith::sub(arith::sub(m1, m2, ctx), m3, ctx);
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{self, relative_error, values};
    use crate::structures::{naive_matvec, variables, Kind, StructuredMatrix};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn naive(kind: Kind, params: &[TrackedScalar], x: &[TrackedScalar]) -> Vec<Complex64> {
        let m = StructuredMatrix::new(kind, x.len(), params.to_vec()).unwrap();
        values(&naive_matvec(&m, x, &mut CountContext::new()).unwrap())
    }

    #[test]
    fn small_circulant_example() {
        let mut ctx = CountContext::new();
        let out = circulant_matvec(&variables(&[c(1.0), c(2.0)]), &variables(&[c(3.0), c(4.0)]), &mut ctx).unwrap();
        assert!(relative_error(&values(&out), &[c(11.0), c(10.0)]) < 1e-15);
        assert_eq!(ctx.bilinear_mults(), 2);
    }

    #[test]
    fn identity_circulant() {
        let mut ctx = CountContext::new();
        let x = variables(&[c(1.0), Complex64::new(2.0, 1.0), c(-3.0), c(0.5)]);
        let id = variables(&[c(1.0), c(0.0), c(0.0), c(0.0)]);
        let out = circulant_matvec(&id, &x, &mut ctx).unwrap();
        assert!(relative_error(&values(&out), &values(&x)) < 1e-15);
        assert_eq!(ctx.bilinear_mults(), 4);
    }

    #[test]
    fn f_one_matches_circulant_exactly() {
        let mut r = harness::rng(5);
        let cc = harness::disk_variables(&mut r, 6);
        let x = harness::disk_variables(&mut r, 6);
        let a = circulant_matvec(&cc, &x, &mut CountContext::new()).unwrap();
        let b = f_circulant_matvec(&cc, c(1.0), &x, &mut CountContext::new()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn skew_circulant_gauss_pattern() {
        let (a, b, cp, d) = (c(1.5), c(-0.5), c(2.0), c(3.0));
        let out = f_circulant_matvec(&variables(&[a, b]), c(-1.0), &variables(&[cp, -d]), &mut CountContext::new()).unwrap();
        assert!(relative_error(&values(&out), &[a * cp - b * d, -a * d - b * cp]) < 1e-15);
    }

    #[test]
    fn f_circulant_matches_naive() {
        let mut r = harness::rng(11);
        for f in [c(2.0), c(-1.0), Complex64::new(0.0, 1.0), Complex64::new(-3.0, 0.25)] {
            for n in 1..=9 {
                let cc = harness::disk_variables(&mut r, n);
                let x = harness::disk_variables(&mut r, n);
                let mut ctx = CountContext::new();
                let out = f_circulant_matvec(&cc, f, &x, &mut ctx).unwrap();
                assert_eq!(ctx.bilinear_mults(), n as u64);
                let err = relative_error(&values(&out), &naive(Kind::FCirculant { f }, &cc, &x));
                assert!(err < 1e-9, "f={f} n={n} err={err}");
            }
        }
    }

    #[test]
    fn zero_f_is_rejected() {
        let x = variables(&[c(1.0), c(2.0)]);
        assert_eq!(f_circulant_matvec(&x, c(0.0), &x, &mut CountContext::new()).unwrap_err(), Error::ZeroF);
        assert_eq!(f_circulant_inverse(&x, c(0.0), &mut CountContext::new()).unwrap_err(), Error::ZeroF);
    }

    #[test]
    fn inverse_examples() {
        let mut ctx = CountContext::new();
        let inv = circulant_inverse(&variables(&[c(1.0), c(0.0)]), &mut ctx).unwrap();
        assert!(relative_error(&values(&inv), &[c(1.0), c(0.0)]) < 1e-15);
        assert_eq!(ctx.divisions(), 2);
        assert_eq!(ctx.bilinear_mults(), 0);

        let inv = circulant_inverse(&variables(&[c(2.0), c(1.0)]), &mut CountContext::new()).unwrap();
        assert!(relative_error(&values(&inv), &[c(2.0 / 3.0), c(-1.0 / 3.0)]) < 1e-15);

        let err = circulant_inverse(&variables(&[c(1.0), c(1.0)]), &mut CountContext::new()).unwrap_err();
        assert!(matches!(err, Error::Singular { index: 1, .. }));
    }

    #[test]
    fn f_inverse_is_an_inverse() {
        let mut r = harness::rng(3);
        for f in [c(-1.0), c(2.0), Complex64::new(0.0, 1.0)] {
            for n in 1..=7 {
                let mut cc = harness::disk_variables(&mut r, n);
                cc[0].value += (n + 1) as f64;
                let mut ctx = CountContext::new();
                let inv = f_circulant_inverse(&cc, f, &mut ctx).unwrap();
                assert_eq!(ctx.divisions(), n as u64);
                assert_eq!(ctx.bilinear_mults(), 0);
                // FCirc(c)·FCirc(inv)·e_j = e_j for each column.
                for j in 0..n {
                    let e: Vec<Complex64> = (0..n).map(|k| c(if k == j { 1.0 } else { 0.0 })).collect();
                    let col = naive(Kind::FCirculant { f }, &inv, &variables(&e));
                    let back = naive(Kind::FCirculant { f }, &cc, &variables(&col));
                    assert!(relative_error(&back, &e) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn gauss_examples() {
        let t = TrackedScalar::real_variable;
        let mut ctx = CountContext::new();
        let (re, im) = gauss_complex_mul(t(1.0), t(2.0), t(3.0), t(4.0), &mut ctx);
        assert_eq!((re.value, im.value), (c(-5.0), c(10.0)));
        assert_eq!(ctx.bilinear_mults(), 3);
        let (re, im) = gauss_complex_mul(t(3.0), t(0.0), t(-2.0), t(0.0), &mut CountContext::new());
        assert_eq!((re.value, im.value), (c(-6.0), c(0.0)));
    }
}
