//! Seeded random inputs and error metrics shared by the CLI and the tests.
//!
//! The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`, so a
//! 64-bit seed fixes every draw on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::TrackedScalar;
use crate::structures::SparsityPattern;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real and imaginary parts uniform in [−1, 1].
pub fn unit_box<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

/// Uniform in the closed complex unit disk (rejection from the box).
pub fn unit_disk<R: Rng>(rng: &mut R) -> Complex64 {
    loop {
        let z = unit_box(rng);
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

pub fn box_values<R: Rng>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| unit_box(rng)).collect()
}

pub fn disk_values<R: Rng>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| unit_disk(rng)).collect()
}

pub fn box_variables<R: Rng>(rng: &mut R, len: usize) -> Vec<TrackedScalar> {
    box_values(rng, len).into_iter().map(TrackedScalar::variable).collect()
}

pub fn disk_variables<R: Rng>(rng: &mut R, len: usize) -> Vec<TrackedScalar> {
    disk_values(rng, len).into_iter().map(TrackedScalar::variable).collect()
}

/// Random square pattern; each position is kept with probability `density`.
pub fn random_pattern<R: Rng>(rng: &mut R, n: usize, density: f64) -> SparsityPattern {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(density) {
                entries.push((i, j));
            }
        }
    }
    SparsityPattern::square(n, entries).expect("generated entries are in range and distinct")
}

/// `‖a − b‖₂ / ‖b‖₂`, or `‖a − b‖₂` when `b` is zero.
pub fn relative_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "relative_error needs equal lengths");
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let norm: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        diff
    } else {
        diff / norm
    }
}

pub fn values(v: &[TrackedScalar]) -> Vec<Complex64> {
    v.iter().map(|x| x.value).collect()
}
