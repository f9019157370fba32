//! Sums of weighted rank-one terms, their verification, the coefficient-sum
//! stability measure and the JSON file format.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Tensor3;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub lambda: Complex64,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub w: Vec<Complex64>,
}

impl Term {
    pub fn new(lambda: Complex64, u: Vec<Complex64>, v: Vec<Complex64>, w: Vec<Complex64>) -> Self {
        Self { lambda, u, v, w }
    }

    /// Real-valued shorthand.
    pub fn real(lambda: f64, u: &[f64], v: &[f64], w: &[f64]) -> Self {
        let cv = |x: &[f64]| x.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::new(Complex64::new(lambda, 0.0), cv(u), cv(v), cv(w))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDecomposition {
    dims: [usize; 3],
    terms: Vec<Term>,
}

impl TensorDecomposition {
    pub fn new(dims: (usize, usize, usize), terms: Vec<Term>) -> Result<Self> {
        let d = Self { dims: [dims.0, dims.1, dims.2], terms };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        for (r, t) in self.terms.iter().enumerate() {
            if t.u.len() != self.dims[0] || t.v.len() != self.dims[1] || t.w.len() != self.dims[2] {
                return Err(Error::DimensionMismatch(format!(
                    "term {r} has factor lengths ({}, {}, {}) but dims are {:?}",
                    t.u.len(),
                    t.v.len(),
                    t.w.len(),
                    self.dims
                )));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.dims[0], self.dims[1], self.dims[2])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ λ_r u_r ⊗ v_r ⊗ w_r`.
    pub fn to_tensor(&self) -> Result<Tensor3> {
        let mut t = Tensor3::zeros(self.dims())?;
        for term in &self.terms {
            for (i, u) in term.u.iter().enumerate() {
                let lu = term.lambda * u;
                if lu == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (j, v) in term.v.iter().enumerate() {
                    let luv = lu * v;
                    if luv == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (k, w) in term.w.iter().enumerate() {
                        let cur = t.get(i, j, k);
                        t.set(i, j, k, cur + luv * w);
                    }
                }
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub max_abs_error: f64,
    pub term_count: usize,
    pub pass: bool,
}

pub fn verify_decomposition(t: &Tensor3, d: &TensorDecomposition, tol: f64) -> Result<VerifyReport> {
    if t.dims() != d.dims() {
        return Err(Error::DimensionMismatch(format!(
            "tensor dims {:?} but decomposition dims {:?}",
            t.dims(),
            d.dims()
        )));
    }
    let max_abs_error = t.max_abs_diff(&d.to_tensor()?)?;
    Ok(VerifyReport { max_abs_error, term_count: d.len(), pass: max_abs_error <= tol })
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `Σ |λ_r|·‖u_r‖·‖v_r‖·‖w_r‖`, i.e. the coefficient sum after normalising
/// every factor to unit length.
pub fn stability_measure(d: &TensorDecomposition) -> Result<f64> {
    let mut total = 0.0;
    for (r, t) in d.terms.iter().enumerate() {
        let norms = [norm(&t.u), norm(&t.v), norm(&t.w)];
        if norms.contains(&0.0) {
            return Err(Error::ZeroFactor(r));
        }
        total += t.lambda.norm() * norms[0] * norms[1] * norms[2];
    }
    Ok(total)
}

pub fn parse_decomposition(text: &str) -> Result<TensorDecomposition> {
    let d: TensorDecomposition = serde_json::from_str(text)?;
    d.validate().map_err(|e| Error::Schema { path: "$.terms".into(), message: e.to_string() })?;
    Ok(d)
}

pub fn serialize_decomposition(d: &TensorDecomposition) -> String {
    serde_json::to_string(d).expect("decompositions serialize")
}

/// Named decompositions of complex multiplication.
pub mod presets {
    use super::*;

    /// `e₁⊗e₁⊗e₁ − e₂⊗e₂⊗e₁ + e₁⊗e₂⊗e₂ + e₂⊗e₁⊗e₂`.
    pub fn usual() -> TensorDecomposition {
        TensorDecomposition::new(
            (2, 2, 2),
            vec![
                Term::real(1.0, &[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]),
                Term::real(-1.0, &[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0]),
                Term::real(1.0, &[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]),
                Term::real(1.0, &[0.0, 1.0], &[1.0, 0.0], &[0.0, 1.0]),
            ],
        )
        .expect("consistent dims")
    }

    /// Three terms: `(e₁+e₂)⊗(e₁+e₂)⊗e₂ + e₁⊗e₁⊗(e₁−e₂) − e₂⊗e₂⊗(e₁+e₂)`.
    pub fn gauss() -> TensorDecomposition {
        TensorDecomposition::new(
            (2, 2, 2),
            vec![
                Term::real(1.0, &[1.0, 1.0], &[1.0, 1.0], &[0.0, 1.0]),
                Term::real(1.0, &[1.0, 0.0], &[1.0, 0.0], &[1.0, -1.0]),
                Term::real(-1.0, &[0.0, 1.0], &[0.0, 1.0], &[1.0, 1.0]),
            ],
        )
        .expect("consistent dims")
    }

    /// Symmetric three-term form with weight 4/3 on
    /// `a = (√3/2, 1/2)`, `b = (−√3/2, 1/2)`, `c = (0, −1)`. As a symmetric
    /// tensor it equals complex multiplication with the two output
    /// coordinates exchanged, so the w factors are stored with their
    /// coordinates swapped.
    pub fn cube() -> TensorDecomposition {
        let h = 3f64.sqrt() / 2.0;
        let factors = [[h, 0.5], [-h, 0.5], [0.0, -1.0]];
        let terms = factors
            .iter()
            .map(|f| Term::real(4.0 / 3.0, f, f, &[f[1], f[0]]))
            .collect();
        TensorDecomposition::new((2, 2, 2), terms).expect("consistent dims")
    }

    pub fn by_name(name: &str) -> Option<TensorDecomposition> {
        match name {
            "usual" => Some(usual()),
            "gauss" => Some(gauss()),
            "cube" => Some(cube()),
            _ => None,
        }
    }
}
