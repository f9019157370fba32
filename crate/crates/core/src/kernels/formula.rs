//! Closed-form multiplication counts.

use crate::structures::{Kind, Level};

/// `n² − n − ⌈(n−1)/2⌉ + 1` for n ≥ 2; a 1×1 skew-symmetric matrix is zero
/// and costs nothing.
pub fn skew_symmetric_count(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    let n = n as u64;
    n * n - n - n / 2 + 1
}

/// The bilinear multiplication count each fast kernel achieves.
pub fn formula_count(kind: &Kind, n: usize) -> u64 {
    let m = n as u64;
    match kind {
        Kind::Circulant | Kind::FCirculant { .. } => m,
        Kind::Toeplitz | Kind::Hankel | Kind::UpperTriangularToeplitz => 2 * m - 1,
        Kind::ToeplitzPlusHankel => 4 * m - 3,
        Kind::Symmetric => m * (m + 1) / 2,
        Kind::SkewSymmetric => skew_symmetric_count(n),
        Kind::Sparse(p) => p.len() as u64,
        Kind::Multilevel(levels) => levels.iter().map(|l: &Level| formula_count(&l.kind, l.n)).product(),
    }
}

/// `n(2n − 1)` for the Toeplitz-times-dense product.
pub fn toeplitz_matmul_count(n: usize) -> u64 {
    let n = n as u64;
    n * (2 * n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_formula_matches_ceiling_form() {
        for n in 2..=40usize {
            let ceil = n / 2; // ⌈(n−1)/2⌉
            assert_eq!(ceil, (n - 1).div_ceil(2));
            assert_eq!(skew_symmetric_count(n), (n * n - n - ceil + 1) as u64);
        }
        assert_eq!(skew_symmetric_count(3), 6);
        assert_eq!(skew_symmetric_count(2), 2);
    }

    #[test]
    fn small_values() {
        assert_eq!(formula_count(&Kind::ToeplitzPlusHankel, 1), 1);
        assert_eq!(formula_count(&Kind::ToeplitzPlusHankel, 3), 9);
        assert_eq!(formula_count(&Kind::Symmetric, 4), 10);
        assert_eq!(toeplitz_matmul_count(2), 6);
    }
}
