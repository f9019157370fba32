//! The 2×2 commutator with six multiplications.

use crate::arith::{self, CountContext, TrackedScalar};

pub type Matrix2 = [[TrackedScalar; 2]; 2];

/// `[A, X] = AX − XA` with six products.
///
/// With `A = [[a,b],[c,d]]`, `X = [[x,y],[z,w]]`, `s = (−c, b, a−d)` and
/// `t = (x−w, y, z)`, the commutator is `[[w₁, w₂], [w₃, −w₁]]` where
/// `w₁ = s₁t₂ + s₂t₃`, `w₂ = −s₂t₁ + s₃t₂`, `w₃ = −s₁t₁ − s₃t₃`.
pub fn commutator_2x2(a: &Matrix2, x: &Matrix2, ctx: &mut CountContext) -> Matrix2 {
    let s1 = arith::neg(a[1][0]);
    let s2 = a[0][1];
    let s3 = arith::sub(a[0][0], a[1][1], ctx);
    let t1 = arith::sub(x[0][0], x[1][1], ctx);
    let t2 = x[0][1];
    let t3 = x[1][0];

    let s1t1 = arith::mul(s1, t1, ctx);
    let s3t3 = arith::mul(s3, t3, ctx);
    let s1t2 = arith::mul(s1, t2, ctx);
    let s2t3 = arith::mul(s2, t3, ctx);
    let s2t1 = arith::mul(s2, t1, ctx);
    let s3t2 = arith::mul(s3, t2, ctx);

    let w1 = arith::add(s1t2, s2t3, ctx);
    let w2 = arith::sub(s3t2, s2t1, ctx);
    let w3 = arith::sub(arith::neg(s1t1), s3t3, ctx);
    [[w1, w2], [w3, arith::neg(w1)]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness;
    use num_complex::Complex64;

    fn m(v: [[f64; 2]; 2]) -> Matrix2 {
        v.map(|row| row.map(TrackedScalar::real_variable))
    }

    fn naive(a: &Matrix2, x: &Matrix2) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[i][j] += a[i][k].value * x[k][j].value - x[i][k].value * a[k][j].value;
                }
            }
        }
        out
    }

    #[test]
    fn example() {
        let mut ctx = CountContext::new();
        let out = commutator_2x2(&m([[1.0, 2.0], [3.0, 4.0]]), &m([[0.0, 1.0], [0.0, 0.0]]), &mut ctx);
        let vals = out.map(|r| r.map(|x| x.value.re));
        assert_eq!(vals, [[-3.0, -3.0], [0.0, 3.0]]);
        assert_eq!(ctx.bilinear_mults(), 6);
    }

    #[test]
    fn diagonal_matrices_commute() {
        let out = commutator_2x2(&m([[2.0, 0.0], [0.0, 5.0]]), &m([[-1.0, 0.0], [0.0, 7.0]]), &mut CountContext::new());
        assert!(out.iter().flatten().all(|x| x.value == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn random_inputs_match_and_are_trace_free() {
        let mut r = harness::rng(12);
        for _ in 0..100 {
            let a: Matrix2 = [harness::disk_variables(&mut r, 2), harness::disk_variables(&mut r, 2)].map(|v| [v[0], v[1]]);
            let x: Matrix2 = [harness::disk_variables(&mut r, 2), harness::disk_variables(&mut r, 2)].map(|v| [v[0], v[1]]);
            let mut ctx = CountContext::new();
            let out = commutator_2x2(&a, &x, &mut ctx);
            assert_eq!(ctx.bilinear_mults(), 6);
            let expect = naive(&a, &x);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((out[i][j].value - expect[i][j]).norm() < 1e-12);
                }
            }
            assert_eq!(out[0][0].value + out[1][1].value, Complex64::new(0.0, 0.0));
        }
    }
}
