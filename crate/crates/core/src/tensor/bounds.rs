//! Lower bounds on rank and border rank: flattening ranks and the 9×9
//! determinant test for 3×3×3 tensors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Tensor3;
use crate::error::{Error, Result};

pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-9;

/// Nonsingularity threshold on `|det|` after row-norm scaling.
pub const OTTAVIANI_DET_THRESHOLD: f64 = 1e-6;

fn numerical_rank(m: DMatrix<Complex64>, tol: f64) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Numerical ranks of the three unfoldings `A* → B⊗C`, `B* → A⊗C`,
/// `C* → A⊗B` (singular values above `tol·σ_max`).
pub fn flattening_ranks(t: &Tensor3, tol: f64) -> (usize, usize, usize) {
    let (d1, d2, d3) = t.dims();
    let m1 = DMatrix::from_fn(d1, d2 * d3, |i, c| t.get(i, c / d3, c % d3));
    let m2 = DMatrix::from_fn(d2, d1 * d3, |j, c| t.get(c / d3, j, c % d3));
    let m3 = DMatrix::from_fn(d3, d1 * d2, |k, c| t.get(c / d2, c % d2, k));
    (numerical_rank(m1, tol), numerical_rank(m2, tol), numerical_rank(m3, tol))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OttavianiReport {
    pub nonsingular: bool,
    pub det_magnitude: f64,
}

impl OttavianiReport {
    /// Border-rank lower bound the test certifies, if any.
    pub fn border_rank_bound(&self) -> Option<usize> {
        self.nonsingular.then_some(5)
    }
}

/// Builds `[[0, X₃, −X₂], [−X₃, 0, X₁], [X₂, −X₁, 0]]` from the slices
/// `X_i = T(i, :, :)` and tests it for singularity. A rank-one tensor gives
/// a matrix of rank 2, so border rank ≤ 4 forces rank ≤ 8 and a singular
/// matrix; nonsingular therefore certifies border rank ≥ 5.
pub fn ottaviani_test(t: &Tensor3) -> Result<OttavianiReport> {
    if t.dims() != (3, 3, 3) {
        return Err(Error::DimensionMismatch(format!(
            "the determinant test needs a 3x3x3 tensor, got {:?}",
            t.dims()
        )));
    }
    // blocks[r][c] = (slice, sign)
    let blocks: [[Option<(usize, f64)>; 3]; 3] = [
        [None, Some((2, 1.0)), Some((1, -1.0))],
        [Some((2, -1.0)), None, Some((0, 1.0))],
        [Some((1, 1.0)), Some((0, -1.0)), None],
    ];
    let mut m = DMatrix::from_fn(9, 9, |r, c| match blocks[r / 3][c / 3] {
        Some((slice, sign)) => t.get(slice, r % 3, c % 3) * sign,
        None => Complex64::new(0.0, 0.0),
    });
    for mut row in m.row_iter_mut() {
        let norm = row.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(OttavianiReport { nonsingular: false, det_magnitude: 0.0 });
        }
        row /= Complex64::new(norm, 0.0);
    }
    let det_magnitude = m.lu().determinant().norm();
    Ok(OttavianiReport { nonsingular: det_magnitude > OTTAVIANI_DET_THRESHOLD, det_magnitude })
}
