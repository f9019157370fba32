//! Structured matrix classes, their dense expansion, the naive matvec oracle
//! and basis enumeration.
//!
//! Canonical parameter orders:
//!
//! | kind | params | entry `(i, j)` |
//! |------|--------|----------------|
//! | circulant | `c_0..c_{n-1}` (first row) | `c_{(j-i) mod n}` |
//! | f-circulant | `c_0..c_{n-1}` (first row) | `c_{j-i}` if `j ≥ i`, else `f·c_{n+j-i}` |
//! | Toeplitz | `t_{-(n-1)}..t_{n-1}` | `t_{j-i}` |
//! | Hankel | `h_0..h_{2n-2}` | `h_{i+j}` |
//! | upper-triangular Toeplitz | `a_0..a_{n-1}` | `a_{j-i}` if `j ≥ i` |
//! | Toeplitz-plus-Hankel | Toeplitz params then Hankel params | `t_{j-i} + h_{i+j}` |
//! | symmetric | row-major upper triangle | |
//! | skew-symmetric | row-major strict upper triangle | |
//! | sparse | one value per pattern entry, in pattern order | |
//! | multilevel | lexicographic, outer level slowest | Kronecker sum |

pub mod io;

use num_complex::Complex64;

use crate::arith::{self, CountContext, ScalarKind, TrackedScalar};
use crate::error::{Error, Result};

pub type Dense = Vec<Vec<TrackedScalar>>;

/// Set of `(row, column)` positions inside a `rows × cols` box.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityPattern {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize)>,
}

impl SparsityPattern {
    pub fn new(rows: usize, cols: usize, entries: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(i, j) in &entries {
            if i >= rows || j >= cols {
                return Err(Error::InvalidPattern(format!(
                    "entry ({i}, {j}) outside a {rows}x{cols} matrix"
                )));
            }
            if !seen.insert((i, j)) {
                return Err(Error::InvalidPattern(format!("duplicate entry ({i}, {j})")));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn square(n: usize, entries: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, n, entries)
    }

    pub fn diagonal(n: usize) -> Self {
        Self { rows: n, cols: n, entries: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn upper_triangular(n: usize) -> Self {
        let entries = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        Self { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One level of a multilevel (Kronecker-structured) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub kind: Kind,
    pub n: usize,
}

impl Level {
    pub fn new(kind: Kind, n: usize) -> Result<Self> {
        if !kind.allowed_as_level() {
            return Err(Error::Unsupported(format!(
                "{} cannot be a multilevel level",
                kind.name()
            )));
        }
        validate_order(&kind, n)?;
        Ok(Self { kind, n })
    }

    pub fn param_count(&self) -> usize {
        param_count(&self.kind, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Circulant,
    FCirculant { f: Complex64 },
    Toeplitz,
    Hankel,
    UpperTriangularToeplitz,
    ToeplitzPlusHankel,
    Symmetric,
    SkewSymmetric,
    Sparse(SparsityPattern),
    Multilevel(Vec<Level>),
}

impl Kind {
    /// Stable snake_case identifier used in JSON and CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Circulant => "circulant",
            Kind::FCirculant { .. } => "f_circulant",
            Kind::Toeplitz => "toeplitz",
            Kind::Hankel => "hankel",
            Kind::UpperTriangularToeplitz => "upper_triangular_toeplitz",
            Kind::ToeplitzPlusHankel => "toeplitz_plus_hankel",
            Kind::Symmetric => "symmetric",
            Kind::SkewSymmetric => "skew_symmetric",
            Kind::Sparse(_) => "sparse",
            Kind::Multilevel(_) => "multilevel",
        }
    }

    pub fn allowed_as_level(&self) -> bool {
        matches!(
            self,
            Kind::Toeplitz
                | Kind::Hankel
                | Kind::Circulant
                | Kind::FCirculant { .. }
                | Kind::ToeplitzPlusHankel
                | Kind::Symmetric
                | Kind::Sparse(_)
        )
    }
}

fn validate_order(kind: &Kind, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionMismatch("order must be positive".into()));
    }
    match kind {
        Kind::FCirculant { f } if f.norm() == 0.0 => Err(Error::ZeroF),
        Kind::Sparse(p) if p.rows != n || p.cols != n => Err(Error::InvalidPattern(format!(
            "pattern is {}x{} but the matrix has order {n}",
            p.rows, p.cols
        ))),
        Kind::Multilevel(levels) => {
            if levels.is_empty() {
                return Err(Error::Unsupported("multilevel needs at least one level".into()));
            }
            let prod: usize = levels.iter().map(|l| l.n).product();
            if prod != n {
                return Err(Error::DimensionMismatch(format!(
                    "level orders multiply to {prod}, expected {n}"
                )));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

/// Number of data parameters for `kind` at order `n`.
pub fn param_count(kind: &Kind, n: usize) -> usize {
    match kind {
        Kind::Circulant | Kind::FCirculant { .. } | Kind::UpperTriangularToeplitz => n,
        Kind::Toeplitz | Kind::Hankel => 2 * n - 1,
        Kind::ToeplitzPlusHankel => 4 * n - 2,
        Kind::Symmetric => n * (n + 1) / 2,
        Kind::SkewSymmetric => n * (n - 1) / 2,
        Kind::Sparse(p) => p.len(),
        Kind::Multilevel(levels) => levels.iter().map(Level::param_count).product(),
    }
}

/// Dimension of the structure's linear space (the basis length).
pub fn dimension(kind: &Kind, n: usize) -> usize {
    match kind {
        Kind::ToeplitzPlusHankel => tph_dimension(n),
        Kind::Multilevel(levels) => levels.iter().map(|l| dimension(&l.kind, l.n)).product(),
        _ => param_count(kind, n),
    }
}

/// `4n − 4` for `n ≥ 2`. The Toeplitz and Hankel spaces share the all-ones
/// matrix and the checkerboard `(−1)^{i+j}`, so two parameters are dependent.
pub fn tph_dimension(n: usize) -> usize {
    if n <= 1 {
        n
    } else {
        4 * n - 4
    }
}

/// Row-major index of `(i, j)`, `i ≤ j`, in an upper triangle of order n.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    // Rows 0..i hold n + (n-1) + ... + (n-i+1) entries.
    i * n - (i * i.saturating_sub(1)) / 2 + j - i
}

/// Row-major index of `(i, j)`, `i < j`, in a strict upper triangle of order n.
pub fn strict_upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Rows 0..i hold (n-1) + (n-2) + ... + (n-i) entries.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredMatrix {
    kind: Kind,
    n: usize,
    data: Vec<TrackedScalar>,
}

impl StructuredMatrix {
    pub fn new(kind: Kind, n: usize, data: Vec<TrackedScalar>) -> Result<Self> {
        validate_order(&kind, n)?;
        if let Kind::Multilevel(levels) = &kind {
            for level in levels {
                if !level.kind.allowed_as_level() {
                    return Err(Error::Unsupported(format!(
                        "{} cannot be a multilevel level",
                        level.kind.name()
                    )));
                }
                validate_order(&level.kind, level.n)?;
            }
        }
        let expected = param_count(&kind, n);
        if data.len() != expected {
            return Err(Error::DataLength {
                kind: kind.name().to_string(),
                expected,
                got: data.len(),
            });
        }
        Ok(Self { kind, n, data })
    }

    /// Builds a matrix whose parameters are all `Variable`.
    pub fn from_values(kind: Kind, n: usize, values: &[Complex64]) -> Result<Self> {
        Self::new(kind, n, values.iter().map(|&v| TrackedScalar::variable(v)).collect())
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[TrackedScalar] {
        &self.data
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.data.iter().map(|x| x.value).collect()
    }

    pub fn densify(&self) -> Result<Dense> {
        densify_data(&self.kind, self.n, &self.data)
    }
}

fn zero_matrix(n: usize) -> Dense {
    vec![vec![TrackedScalar::zero(); n]; n]
}

/// `f·x` without counting; used only for dense expansion.
fn scaled(f: Complex64, x: TrackedScalar) -> TrackedScalar {
    TrackedScalar::new(f * x.value, x.kind)
}

/// Dense expansion. Entries not determined by the data are constant zero.
pub fn densify(m: &StructuredMatrix) -> Result<Dense> {
    m.densify()
}

fn densify_data(kind: &Kind, n: usize, d: &[TrackedScalar]) -> Result<Dense> {
    let expected = param_count(kind, n);
    if d.len() != expected {
        return Err(Error::DataLength { kind: kind.name().to_string(), expected, got: d.len() });
    }
    let mut a = zero_matrix(n);
    match kind {
        Kind::Circulant => {
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = d[(j + n - i) % n];
                }
            }
        }
        Kind::FCirculant { f } => {
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = if j >= i { d[j - i] } else { scaled(*f, d[n + j - i]) };
                }
            }
        }
        Kind::Toeplitz => {
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = d[j + n - 1 - i];
                }
            }
        }
        Kind::Hankel => {
            for (i, row) in a.iter_mut().enumerate() {
                row.copy_from_slice(&d[i..i + n]);
            }
        }
        Kind::UpperTriangularToeplitz => {
            for (i, row) in a.iter_mut().enumerate() {
                row[i..].copy_from_slice(&d[..n - i]);
            }
        }
        Kind::ToeplitzPlusHankel => {
            let m = 2 * n - 1;
            let mut ctx = CountContext::new();
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = arith::add(d[j + n - 1 - i], d[m + i + j], &mut ctx);
                }
            }
        }
        Kind::Symmetric => {
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    a[i][j] = d[k];
                    a[j][i] = d[k];
                    k += 1;
                }
            }
        }
        Kind::SkewSymmetric => {
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    a[i][j] = d[k];
                    a[j][i] = arith::neg(d[k]);
                    k += 1;
                }
            }
        }
        Kind::Sparse(p) => {
            for (&(i, j), &v) in p.entries.iter().zip(d) {
                a[i][j] = v;
            }
        }
        Kind::Multilevel(levels) => return densify_multilevel(levels, d),
    }
    Ok(a)
}

/// Dense matrices of the unit parameter vectors: `units[p]` is the matrix
/// with parameter p equal to 1 and all others 0.
pub fn param_units(kind: &Kind, n: usize) -> Result<Vec<Vec<Vec<Complex64>>>> {
    let count = param_count(kind, n);
    (0..count)
        .map(|p| {
            let data: Vec<TrackedScalar> = (0..count)
                .map(|q| TrackedScalar::real_constant(if p == q { 1.0 } else { 0.0 }))
                .collect();
            Ok(densify_data(kind, n, &data)?
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.value).collect())
                .collect())
        })
        .collect()
}

/// `Σ_p U_p ⊗ D_p` where `U_p` are the outer level's parameter units and
/// `D_p` the dense inner matrix built from the p-th data block.
fn densify_multilevel(levels: &[Level], d: &[TrackedScalar]) -> Result<Dense> {
    let outer = &levels[0];
    if levels.len() == 1 {
        return densify_data(&outer.kind, outer.n, d);
    }
    let inner_levels = &levels[1..];
    let inner_n: usize = inner_levels.iter().map(|l| l.n).product();
    let inner_params: usize = inner_levels.iter().map(Level::param_count).product();
    let units = param_units(&outer.kind, outer.n)?;
    let blocks: Vec<Dense> = d
        .chunks(inner_params)
        .map(|chunk| densify_multilevel(inner_levels, chunk))
        .collect::<Result<_>>()?;
    let size = outer.n * inner_n;
    let mut a = zero_matrix(size);
    let mut ctx = CountContext::new();
    for i1 in 0..outer.n {
        for j1 in 0..outer.n {
            for i2 in 0..inner_n {
                for j2 in 0..inner_n {
                    let mut acc: Option<TrackedScalar> = None;
                    for (p, unit) in units.iter().enumerate() {
                        let coef = unit[i1][j1];
                        let entry = blocks[p][i2][j2];
                        if coef == Complex64::new(0.0, 0.0) || entry.is_structural_zero() {
                            continue;
                        }
                        let term = scaled(coef, entry);
                        acc = Some(match acc {
                            None => term,
                            Some(s) => arith::add(s, term, &mut ctx),
                        });
                    }
                    if let Some(v) = acc {
                        a[i1 * inner_n + i2][j1 * inner_n + j2] = v;
                    }
                }
            }
        }
    }
    Ok(a)
}

/// Entrywise matrix-vector product that skips constant-zero entries. The
/// bilinear count equals the number of structurally nonzero entries whenever
/// the vector is variable.
pub fn naive_matvec_dense(a: &[Vec<TrackedScalar>], x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    let mut out = Vec::with_capacity(a.len());
    for (r, row) in a.iter().enumerate() {
        if row.len() != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "row {r} has {} columns but the vector has {} entries",
                row.len(),
                x.len()
            )));
        }
        let mut acc: Option<TrackedScalar> = None;
        for (aij, xj) in row.iter().zip(x) {
            if aij.is_structural_zero() {
                continue;
            }
            let p = arith::mul(*aij, *xj, ctx);
            acc = Some(match acc {
                None => p,
                Some(s) => arith::add(s, p, ctx),
            });
        }
        out.push(acc.unwrap_or_else(TrackedScalar::zero));
    }
    Ok(out)
}

pub fn naive_matvec(m: &StructuredMatrix, x: &[TrackedScalar], ctx: &mut CountContext) -> Result<Vec<TrackedScalar>> {
    if x.len() != m.n {
        return Err(Error::DimensionMismatch(format!(
            "matrix has order {} but the vector has {} entries",
            m.n,
            x.len()
        )));
    }
    naive_matvec_dense(&m.densify()?, x, ctx)
}

/// Number of structurally nonzero entries, i.e. the naive bilinear count.
pub fn naive_count(m: &StructuredMatrix) -> Result<u64> {
    Ok(m
        .densify()?
        .iter()
        .flatten()
        .filter(|x| !x.is_structural_zero())
        .count() as u64)
}

/// Parameter indices that carry the basis elements. All kinds use every
/// parameter except Toeplitz-plus-Hankel, which drops its last Hankel
/// parameter at `n = 1` and its last two for `n ≥ 2`.
pub fn basis_params(kind: &Kind, n: usize) -> Vec<usize> {
    match kind {
        Kind::ToeplitzPlusHankel => (0..tph_dimension(n)).collect(),
        Kind::Multilevel(levels) => {
            let mut acc: Vec<usize> = vec![0];
            let mut stride_total = 1usize;
            // Build lexicographic indices with the outer level slowest.
            for level in levels.iter().rev() {
                let idx = basis_params(&level.kind, level.n);
                let mut next = Vec::with_capacity(acc.len() * idx.len());
                for &p in &idx {
                    for &q in &acc {
                        next.push(p * stride_total + q);
                    }
                }
                acc = next;
                stride_total *= level.param_count();
            }
            acc.sort_unstable();
            acc
        }
        _ => (0..param_count(kind, n)).collect(),
    }
}

/// A basis of the structure's linear space; each element has exactly one
/// parameter equal to constant 1.
pub fn basis(kind: &Kind, n: usize) -> Result<Vec<StructuredMatrix>> {
    validate_order(kind, n)?;
    let count = param_count(kind, n);
    basis_params(kind, n)
        .into_iter()
        .map(|p| {
            let data = (0..count)
                .map(|q| TrackedScalar::real_constant(if p == q { 1.0 } else { 0.0 }))
                .collect();
            StructuredMatrix::new(kind.clone(), n, data)
        })
        .collect()
}

/// Linear map from parameters to basis coordinates, as a
/// `dimension × param_count` matrix.
pub fn coordinate_matrix(kind: &Kind, n: usize) -> Vec<Vec<f64>> {
    match kind {
        Kind::ToeplitzPlusHankel if n <= 1 => vec![vec![1.0; param_count(kind, n)]; n],
        Kind::ToeplitzPlusHankel => {
            // h_a = H_{2n−2}, h_b = H_{2n−3}. Their share of the all-ones matrix
            // and the checkerboard moves onto the Toeplitz and remaining Hankel
            // coordinates.
            let m = 2 * n - 1;
            let params = 2 * m;
            let (a, b) = (params - 1, params - 2);
            let sign = |k: i64| if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            (0..tph_dimension(n))
                .map(|i| {
                    let mut row = vec![0.0; params];
                    row[i] = 1.0;
                    let (s, flip) = if i < m { (sign(i as i64 - (n as i64 - 1)), 1.0) } else { (sign((i - m) as i64), -1.0) };
                    row[a] = flip * 0.5 * (1.0 + s);
                    row[b] = flip * 0.5 * (1.0 - s);
                    row
                })
                .collect()
        }
        Kind::Multilevel(levels) => {
            let mut acc = vec![vec![1.0]];
            for level in levels {
                let m = coordinate_matrix(&level.kind, level.n);
                acc = kron(&acc, &m);
            }
            acc
        }
        _ => {
            let p = param_count(kind, n);
            (0..p)
                .map(|i| (0..p).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect()
        }
    }
}

fn kron(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (br, bc) = (b.len(), b[0].len());
    let ac = a[0].len();
    let mut out = vec![vec![0.0; ac * bc]; a.len() * br];
    for (i, arow) in a.iter().enumerate() {
        for (j, &av) in arow.iter().enumerate() {
            if av == 0.0 {
                continue;
            }
            for (k, brow) in b.iter().enumerate() {
                for (l, &bv) in brow.iter().enumerate() {
                    out[i * br + k][j * bc + l] = av * bv;
                }
            }
        }
    }
    out
}

/// Basis coordinates of a parameter vector.
pub fn coordinates(kind: &Kind, n: usize, params: &[Complex64]) -> Vec<Complex64> {
    coordinate_matrix(kind, n)
        .iter()
        .map(|row| row.iter().zip(params).map(|(c, p)| p * *c).sum())
        .collect()
}

/// Convenience for tests and tools: variables from plain values.
pub fn variables(values: &[Complex64]) -> Vec<TrackedScalar> {
    values.iter().map(|&v| TrackedScalar::new(v, ScalarKind::Variable)).collect()
}
