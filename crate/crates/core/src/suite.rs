//! Count rows and seeded fast-vs-naive trials, shared by the CLI and the
//! acceptance tests.

use num_complex::Complex64;
use rand::Rng;

use crate::arith::{CountContext, TrackedScalar};
use crate::error::Result;
use crate::harness::{self, relative_error, values};
use crate::kernels::fast_matvec;
use crate::structures::{naive_count, naive_matvec, param_count, Kind, StructuredMatrix};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const WIDE_TOLERANCE: f64 = 1e-7;

/// `1e−7` for multilevel kinds and for f-circulants with `|f| ∉ [0.1, 10]`,
/// `1e−8` otherwise.
pub fn tolerance_for(kind: &Kind) -> f64 {
    match kind {
        Kind::Multilevel(_) => WIDE_TOLERANCE,
        Kind::FCirculant { f } if !(0.1..=10.0).contains(&f.norm()) => WIDE_TOLERANCE,
        _ => DEFAULT_TOLERANCE,
    }
}

/// Name used in count tables: `tph` for Toeplitz-plus-Hankel, `bttb` for
/// two Toeplitz levels, otherwise the kind's name.
pub fn table_name(kind: &Kind) -> String {
    match kind {
        Kind::ToeplitzPlusHankel => "tph".into(),
        Kind::Multilevel(levels) if levels.len() == 2 && levels.iter().all(|l| l.kind == Kind::Toeplitz) => {
            "bttb".into()
        }
        k => k.name().into(),
    }
}

/// `n` as printed in count tables; multilevel sizes are `k1xk2x…`.
pub fn size_label(kind: &Kind, n: usize) -> String {
    match kind {
        Kind::Multilevel(levels) => levels.iter().map(|l| l.n.to_string()).collect::<Vec<_>>().join("x"),
        _ => n.to_string(),
    }
}

/// Input distribution for random trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Uniform in the closed unit disk.
    Disk,
    /// Real and imaginary parts uniform in [−1, 1].
    Box,
}

impl Sampler {
    pub fn variables<R: Rng>(self, rng: &mut R, len: usize) -> Vec<TrackedScalar> {
        match self {
            Sampler::Disk => harness::disk_variables(rng, len),
            Sampler::Box => harness::box_variables(rng, len),
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, kind: &Kind, n: usize, sampler: Sampler) -> Result<StructuredMatrix> {
    StructuredMatrix::new(kind.clone(), n, sampler.variables(rng, param_count(kind, n)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub structure: String,
    pub size: String,
    pub fast_mults: u64,
    pub naive_mults: u64,
    /// The naive count skips a structurally zero diagonal.
    pub naive_skips_diagonal: bool,
    pub formula: u64,
}

impl CountRow {
    pub const CSV_HEADER: &'static str = "structure,n,fast_mults,naive_mults,formula,match";

    pub fn matches(&self) -> bool {
        self.fast_mults == self.formula
    }

    pub fn csv_line(&self) -> String {
        let star = if self.naive_skips_diagonal { "*" } else { "" };
        format!(
            "{},{},{},{}{},{},{}",
            self.structure,
            self.size,
            self.fast_mults,
            self.naive_mults,
            star,
            self.formula,
            self.matches()
        )
    }
}

/// Runs the fast kernel once on a seeded random instance.
pub fn count_row(kind: &Kind, n: usize, seed: u64) -> Result<CountRow> {
    let mut rng = harness::rng(seed);
    let m = random_matrix(&mut rng, kind, n, Sampler::Box)?;
    let x = Sampler::Box.variables(&mut rng, n);
    let report = fast_matvec(&m, &x)?;
    Ok(CountRow {
        structure: table_name(kind),
        size: size_label(kind, n),
        fast_mults: report.counts.bilinear_mults,
        naive_mults: naive_count(&m)?,
        naive_skips_diagonal: matches!(kind, Kind::SkewSymmetric),
        formula: report.formula_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialReport {
    pub trials: usize,
    pub max_relative_error: f64,
    /// Every trial spent exactly the closed-form count.
    pub counts_match: bool,
}

impl TrialReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.counts_match && self.max_relative_error < tol
    }
}

/// `trials` seeded instances of fast vs naive.
pub fn equivalence_trials(kind: &Kind, n: usize, trials: usize, seed: u64, sampler: Sampler) -> Result<TrialReport> {
    let mut rng = harness::rng(seed);
    let mut max_relative_error: f64 = 0.0;
    let mut counts_match = true;
    for _ in 0..trials {
        let m = random_matrix(&mut rng, kind, n, sampler)?;
        let x = sampler.variables(&mut rng, n);
        let report = fast_matvec(&m, &x)?;
        counts_match &= report.count_matches();
        let slow = naive_matvec(&m, &x, &mut CountContext::new())?;
        max_relative_error = max_relative_error.max(relative_error(&values(&report.output), &values(&slow)));
    }
    Ok(TrialReport { trials, max_relative_error, counts_match })
}

/// `FCirc(c, f)·FCirc(c⁻¹, f) − I` in the max norm, from dense products.
pub fn inverse_residual(kind: &Kind, c: &[Complex64], inverse: &[Complex64]) -> Result<f64> {
    let n = c.len();
    let a = StructuredMatrix::from_values(kind.clone(), n, c)?.densify()?;
    let b = StructuredMatrix::from_values(kind.clone(), n, inverse)?.densify()?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = (0..n).map(|k| a[i][k].value * b[k][j].value).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).norm());
        }
    }
    Ok(worst)
}
