//! Order-3 structure tensors and the tools that bound their rank.
//!
//! `entry(i, j, k)` is the k-th coordinate of `β(basis_U[i], basis_V[j])`.
//! For a structured matvec, `U` is the structure's basis, `V` the standard
//! basis of inputs and `W` the standard basis of outputs.

pub mod bounds;
pub mod decomposition;

pub use bounds::{flattening_ranks, ottaviani_test, OttavianiReport, DEFAULT_RANK_TOLERANCE};
pub use decomposition::{
    parse_decomposition, serialize_decomposition, stability_measure, verify_decomposition, Term,
    TensorDecomposition, VerifyReport,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::structures::{basis, dimension, Kind};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    entries: Vec<Complex64>,
}

impl Tensor3 {
    pub fn zeros(dims: (usize, usize, usize)) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || dims.2 == 0 {
            return Err(Error::DimensionMismatch(format!("tensor dims must be positive, got {dims:?}")));
        }
        Ok(Self { dims, entries: vec![Complex64::new(0.0, 0.0); dims.0 * dims.1 * dims.2] })
    }

    pub fn from_fn(dims: (usize, usize, usize), f: impl Fn(usize, usize, usize) -> Complex64) -> Result<Self> {
        let mut t = Self::zeros(dims)?;
        for i in 0..dims.0 {
            for j in 0..dims.1 {
                for k in 0..dims.2 {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        Ok(t)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims.1 + j) * self.dims.2 + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.entries[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Complex64) {
        let idx = self.index(i, j, k);
        self.entries[idx] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Tensor3) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Which bilinear map to build a tensor for.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorSpec {
    Structured { kind: Kind, n: usize },
    Matmul { m: usize, n: usize, p: usize },
    ComplexMul,
    So3,
    CommutatorBeta,
}

impl TensorSpec {
    /// Parses a builder name: `complex_mul`, `so3`, `commutator_beta`,
    /// `skew3` (the 3×3 skew-symmetric matvec) or `matmul:m,n,p`.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "complex_mul" => Ok(TensorSpec::ComplexMul),
            "so3" => Ok(TensorSpec::So3),
            "commutator_beta" => Ok(TensorSpec::CommutatorBeta),
            "skew3" => Ok(TensorSpec::Structured { kind: Kind::SkewSymmetric, n: 3 }),
            other => {
                if let Some(rest) = other.strip_prefix("matmul:") {
                    let parts: Vec<usize> = rest
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::Unsupported(format!("bad matmul sizes \"{rest}\"")))?;
                    if let [m, n, p] = parts[..] {
                        if m > 0 && n > 0 && p > 0 {
                            return Ok(TensorSpec::Matmul { m, n, p });
                        }
                    }
                    return Err(Error::Unsupported(format!("bad matmul sizes \"{rest}\"")));
                }
                Err(Error::Unsupported(format!("unknown tensor builder \"{other}\"")))
            }
        }
    }
}

pub fn build_structure_tensor(spec: &TensorSpec) -> Result<Tensor3> {
    match spec {
        TensorSpec::Structured { kind, n } => structured_tensor(kind, *n),
        TensorSpec::Matmul { m, n, p } => matmul_tensor(*m, *n, *p),
        TensorSpec::ComplexMul => Ok(complex_mul_tensor()),
        TensorSpec::So3 => Ok(so3_tensor()),
        TensorSpec::CommutatorBeta => Ok(commutator_beta_tensor()),
    }
}

/// `entry(i, j, k) = densify(basis_i)[k][j]`.
pub fn structured_tensor(kind: &Kind, n: usize) -> Result<Tensor3> {
    let dim = dimension(kind, n);
    let mats: Vec<Vec<Vec<Complex64>>> = basis(kind, n)?
        .iter()
        .map(|b| Ok(b.densify()?.iter().map(|r| r.iter().map(|x| x.value).collect()).collect()))
        .collect::<Result<_>>()?;
    Tensor3::from_fn((dim, n, n), |i, j, k| mats[i][k][j])
}

/// `μ_{m,n,p}`: A index `i·n + j`, B index `j·p + k`, C index `i·p + k`.
pub fn matmul_tensor(m: usize, n: usize, p: usize) -> Result<Tensor3> {
    let mut t = Tensor3::zeros((m * n, n * p, m * p))?;
    for i in 0..m {
        for j in 0..n {
            for k in 0..p {
                t.set(i * n + j, j * p + k, i * p + k, Complex64::new(1.0, 0.0));
            }
        }
    }
    Ok(t)
}

fn sparse_tensor(dims: (usize, usize, usize), entries: &[((usize, usize, usize), f64)]) -> Tensor3 {
    let mut t = Tensor3::zeros(dims).expect("fixed positive dims");
    for &((i, j, k), v) in entries {
        t.set(i, j, k, Complex64::new(v, 0.0));
    }
    t
}

/// `(a + bi)(c + di)` over ℝ², slices `[[1,0],[0,−1]]` and `[[0,1],[1,0]]`.
pub fn complex_mul_tensor() -> Tensor3 {
    sparse_tensor((2, 2, 2), &[((0, 0, 0), 1.0), ((1, 1, 0), -1.0), ((0, 1, 1), 1.0), ((1, 0, 1), 1.0)])
}

/// Levi-Civita symbol `ε_{ijk} = (i−j)(j−k)(k−i)/2`.
pub fn so3_tensor() -> Tensor3 {
    Tensor3::from_fn((3, 3, 3), |i, j, k| {
        let (i, j, k) = (i as i64, j as i64, k as i64);
        Complex64::new(((i - j) * (j - k) * (k - i)) as f64 / 2.0, 0.0)
    })
    .expect("fixed positive dims")
}

/// `β(s, t) = (s₁t₂ + s₂t₃, −s₂t₁ + s₃t₂, −s₁t₁ − s₃t₃)`.
pub fn commutator_beta_tensor() -> Tensor3 {
    sparse_tensor(
        (3, 3, 3),
        &[
            ((0, 1, 0), 1.0),
            ((1, 2, 0), 1.0),
            ((1, 0, 1), -1.0),
            ((2, 1, 1), 1.0),
            ((0, 0, 2), -1.0),
            ((2, 2, 2), -1.0),
        ],
    )
}

/// `w[k] = Σ_{i,j} T(i,j,k)·u[i]·v[j]`.
pub fn contract(t: &Tensor3, u: &[Complex64], v: &[Complex64]) -> Result<Vec<Complex64>> {
    let (d1, d2, d3) = t.dims();
    if u.len() != d1 || v.len() != d2 {
        return Err(Error::DimensionMismatch(format!(
            "tensor dims {:?} contracted with vectors of length {} and {}",
            t.dims(),
            u.len(),
            v.len()
        )));
    }
    let mut w = vec![Complex64::new(0.0, 0.0); d3];
    for i in 0..d1 {
        if u[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..d2 {
            let uv = u[i] * v[j];
            for (k, wk) in w.iter_mut().enumerate() {
                *wk += t.get(i, j, k) * uv;
            }
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::SparsityPattern;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn complex_mul_contracts_to_the_product() {
        let t = complex_mul_tensor();
        let (a, b, cc, d) = (c(1.5), c(-2.0), c(0.5), c(3.0));
        let w = contract(&t, &[a, b], &[cc, d]).unwrap();
        assert_eq!(w, vec![a * cc - b * d, a * d + b * cc]);
        for e in t.entries() {
            assert!([-1.0, 0.0, 1.0].contains(&e.re) && e.im == 0.0);
        }
    }

    #[test]
    fn trivial_matmul() {
        let t = matmul_tensor(1, 1, 1).unwrap();
        assert_eq!(t.entries(), &[c(1.0)]);
    }

    #[test]
    fn matmul_contracts_to_the_product() {
        let t = matmul_tensor(2, 3, 2).unwrap();
        let a: Vec<Complex64> = (0..6).map(|k| c(k as f64 + 1.0)).collect();
        let b: Vec<Complex64> = (0..6).map(|k| c(2.0 - k as f64)).collect();
        let w = contract(&t, &a, &b).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                let expect: Complex64 = (0..3).map(|j| a[i * 3 + j] * b[j * 2 + k]).sum();
                assert_eq!(w[i * 2 + k], expect);
            }
        }
    }

    #[test]
    fn circulant_contraction() {
        let t = structured_tensor(&Kind::Circulant, 2).unwrap();
        let w = contract(&t, &[c(1.0), c(2.0)], &[c(3.0), c(4.0)]).unwrap();
        assert_eq!(w, vec![c(11.0), c(10.0)]);
        assert_eq!(contract(&t, &[c(0.0), c(0.0)], &[c(3.0), c(4.0)]).unwrap(), vec![c(0.0); 2]);
    }

    #[test]
    fn so3_is_the_cross_product() {
        let t = so3_tensor();
        let u = [c(1.0), c(2.0), c(3.0)];
        let v = [c(-1.0), c(0.5), c(2.0)];
        let w = contract(&t, &u, &v).unwrap();
        let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        assert_eq!(w, cross.to_vec());
    }

    #[test]
    fn builder_names() {
        assert_eq!(TensorSpec::parse("matmul:2,3,4").unwrap(), TensorSpec::Matmul { m: 2, n: 3, p: 4 });
        assert!(TensorSpec::parse("matmul:2,0,4").is_err());
        assert!(TensorSpec::parse("nope").is_err());
        let t = build_structure_tensor(&TensorSpec::parse("skew3").unwrap()).unwrap();
        assert_eq!(t.dims(), (3, 3, 3));
    }

    #[test]
    fn sparse_tensor_dims() {
        let p = SparsityPattern::diagonal(3);
        let t = structured_tensor(&Kind::Sparse(p), 3).unwrap();
        assert_eq!(t.dims(), (3, 3, 3));
        assert_eq!(t.get(1, 1, 1), c(1.0));
        assert_eq!(t.get(1, 0, 1), c(0.0));
    }

    #[test]
    fn zero_dims_rejected() {
        assert!(Tensor3::zeros((0, 1, 1)).is_err());
    }
}
