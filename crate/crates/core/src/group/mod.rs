//! Finite groups as multiplication tables, group algebra products, the
//! triple product property and matrix multiplication through `ℂ[G]`.

pub mod simultaneous;

pub use simultaneous::{blocked_simultaneous, d4_simultaneous, x8_simultaneous, Variant};

use num_complex::Complex64;

use crate::arith::{self, combine, combine_or_zero, CountContext, TrackedScalar};
use crate::error::{Error, Result};

/// Associativity is checked exhaustively up to this order.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    product: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    names: Vec<String>,
}

impl GroupTable {
    /// Validates closure, identity, inverses and (for small orders)
    /// associativity.
    pub fn new(product: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        let order = product.len();
        if order == 0 || names.len() != order || product.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidGroup("table must be square and match the name list".into()));
        }
        if product.iter().flatten().any(|&g| g >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| product[e][g] == g && product[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverse = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| product[g][h] == identity && product[h][g] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {} has no inverse", names[g])))
            })
            .collect::<Result<Vec<_>>>()?;
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if product[product[a][b]][c] != product[a][product[b][c]] {
                            return Err(Error::InvalidGroup(format!(
                                "not associative at ({}, {}, {})",
                                names[a], names[b], names[c]
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { product, identity, inverse, names })
    }

    pub fn order(&self) -> usize {
        self.product.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }
}

/// `C_n = ⟨g⟩`, element k is `g^k`.
pub fn cyclic_group(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidGroup("cyclic group order must be positive".into()));
    }
    let product = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let names = (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g^{k}"),
        })
        .collect();
    GroupTable::new(product, names)
}

/// `D₄ = ⟨x, y | x⁴ = y² = 1, yxy = x⁻¹⟩` in the order
/// `1, x, x², x³, y, xy, x²y, x³y`; index `i + 4e` is `xⁱyᵉ`.
pub fn dihedral8() -> GroupTable {
    let product = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (i, e) = (a % 4, a / 4);
                    let (j, f) = (b % 4, b / 4);
                    // xⁱyᵉ·xʲyᶠ = x^{i + (−1)ᵉ j} y^{e+f}
                    let k = if e == 0 { (i + j) % 4 } else { (i + 4 - j) % 4 };
                    k + 4 * ((e + f) % 2)
                })
                .collect()
        })
        .collect();
    let names = ["1", "x", "x^2", "x^3", "y", "xy", "x^2y", "x^3y"].map(String::from).to_vec();
    GroupTable::new(product, names).expect("the dihedral table is a group")
}

fn in_range(g: &GroupTable, set: &[usize]) -> Result<()> {
    if let Some(&bad) = set.iter().find(|&&s| s >= g.order()) {
        return Err(Error::InvalidGroup(format!("element index {bad} outside a group of order {}", g.order())));
    }
    Ok(())
}

/// True iff `stu = s′t′u′` forces `s = s′, t = t′, u = u′`, i.e. the map
/// `(s, t, u) ↦ stu` is injective on `S × T × U`.
pub fn tpp_check(g: &GroupTable, s: &[usize], t: &[usize], u: &[usize]) -> Result<bool> {
    for set in [s, t, u] {
        in_range(g, set)?;
    }
    let mut seen = vec![false; g.order()];
    let mut distinct = std::collections::HashSet::new();
    for &a in s {
        for &b in t {
            for &c in u {
                if !distinct.insert((a, b, c)) {
                    // A repeated element inside a set is a violation too.
                    return Ok(false);
                }
                let p = g.mul(g.mul(a, b), c);
                if seen[p] {
                    return Ok(false);
                }
                seen[p] = true;
            }
        }
    }
    Ok(true)
}

/// The quotient form `s′⁻¹s · t′⁻¹t · u′⁻¹u = 1 ⇒ s = s′, t = t′, u = u′`,
/// which is what guarantees that `ÂB̂` can be read back as a matrix product.
pub fn quotient_tpp_check(g: &GroupTable, s: &[usize], t: &[usize], u: &[usize]) -> Result<bool> {
    for set in [s, t, u] {
        in_range(g, set)?;
    }
    let quotients = |set: &[usize]| -> Vec<(usize, bool)> {
        let mut q = Vec::new();
        for &a in set {
            for &b in set {
                q.push((g.mul(g.inverse(b), a), a == b));
            }
        }
        q
    };
    let (qs, qt, qu) = (quotients(s), quotients(t), quotients(u));
    for &(a, sa) in &qs {
        for &(b, sb) in &qt {
            for &(c, sc) in &qu {
                if g.mul(g.mul(a, b), c) == g.identity() && !(sa && sb && sc) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A named `(G, S, T, U)`.
#[derive(Debug, Clone)]
pub struct TppPreset {
    pub group: GroupTable,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub u: Vec<usize>,
}

/// `d4-222`: `S = {y, 1}`, `T = {x²y, 1}`, `U = {x³y, 1}` in `D₄`.
/// `cyclic-1n1`: `S = U = {1}`, `T = C_n` (n defaults to 4).
/// `c2-full`: `S = T = U = C₂`, which fails the property.
pub fn tpp_preset(name: &str, n: usize) -> Result<TppPreset> {
    match name {
        "d4-222" => Ok(TppPreset { group: dihedral8(), s: vec![4, 0], t: vec![6, 0], u: vec![7, 0] }),
        "cyclic-1n1" => Ok(TppPreset { group: cyclic_group(n)?, s: vec![0], t: (0..n).collect(), u: vec![0] }),
        "c2-full" => Ok(TppPreset { group: cyclic_group(2)?, s: vec![0, 1], t: vec![0, 1], u: vec![0, 1] }),
        other => Err(Error::Unsupported(format!("unknown triple preset \"{other}\""))),
    }
}

/// Coefficients indexed by group element.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement(pub Vec<TrackedScalar>);

impl GroupAlgebraElement {
    pub fn zero(order: usize) -> Self {
        Self(vec![TrackedScalar::zero(); order])
    }

    /// The basis element of one group element with a constant coefficient.
    pub fn basis(order: usize, g: usize) -> Self {
        let mut v = vec![TrackedScalar::zero(); order];
        v[g] = TrackedScalar::real_constant(1.0);
        Self(v)
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.0.iter().map(|x| x.value).collect()
    }
}

/// Convolution `Σ_{g₁g₂ = h} a[g₁]b[g₂]`, skipping structural zeros.
pub fn group_algebra_mul(
    g: &GroupTable,
    a: &GroupAlgebraElement,
    b: &GroupAlgebraElement,
    ctx: &mut CountContext,
) -> Result<GroupAlgebraElement> {
    let n = g.order();
    if a.0.len() != n || b.0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "group of order {n} with elements of length {} and {}",
            a.0.len(),
            b.0.len()
        )));
    }
    let mut out = GroupAlgebraElement::zero(n);
    for (x, ax) in a.0.iter().enumerate() {
        if ax.is_structural_zero() {
            continue;
        }
        for (y, by) in b.0.iter().enumerate() {
            if by.is_structural_zero() {
                continue;
            }
            let h = g.mul(x, y);
            let p = arith::mul(*ax, *by, ctx);
            out.0[h] = if out.0[h].is_structural_zero() { p } else { arith::add(out.0[h], p, ctx) };
        }
    }
    Ok(out)
}

/// Matrix product through `ℂ[G]`: `Â = Σ a_ij s_i t_j⁻¹`,
/// `B̂ = Σ b_jk t_j u_k⁻¹`, and `(AB)_ik` is the coefficient of `s_i u_k⁻¹`.
pub fn cu_matmul(
    g: &GroupTable,
    s: &[usize],
    t: &[usize],
    u: &[usize],
    a: &[Vec<TrackedScalar>],
    b: &[Vec<TrackedScalar>],
    ctx: &mut CountContext,
) -> Result<Vec<Vec<TrackedScalar>>> {
    let (m, n, p) = (s.len(), t.len(), u.len());
    if a.len() != m || a.iter().any(|r| r.len() != n) || b.len() != n || b.iter().any(|r| r.len() != p) {
        return Err(Error::DimensionMismatch(format!(
            "triple sizes ({m}, {n}, {p}) do not fit A {}x{} and B {}x{}",
            a.len(),
            a.first().map_or(0, Vec::len),
            b.len(),
            b.first().map_or(0, Vec::len)
        )));
    }
    if !tpp_check(g, s, t, u)? || !quotient_tpp_check(g, s, t, u)? {
        return Err(Error::TripleProductViolation);
    }
    let order = g.order();
    let mut ah = GroupAlgebraElement::zero(order);
    for i in 0..m {
        for j in 0..n {
            ah.0[g.mul(s[i], g.inverse(t[j]))] = a[i][j];
        }
    }
    let mut bh = GroupAlgebraElement::zero(order);
    for j in 0..n {
        for k in 0..p {
            bh.0[g.mul(t[j], g.inverse(u[k]))] = b[j][k];
        }
    }
    let prod = group_algebra_mul(g, &ah, &bh, ctx)?;
    Ok((0..m).map(|i| (0..p).map(|k| prod.0[g.mul(s[i], g.inverse(u[k]))]).collect()).collect())
}

/// `D₄` element in Wedderburn coordinates: four characters and the 2×2
/// block of the two-dimensional representation.
#[derive(Debug, Clone, PartialEq)]
pub struct D4Blocks {
    pub chars: [TrackedScalar; 4],
    pub block: [[TrackedScalar; 2]; 2],
}

/// `χ_k(xⁱyᵉ)`: trivial, `(−1)ᵉ`, `(−1)ⁱ`, `(−1)^{i+e}`.
pub fn d4_character(k: usize, g: usize) -> f64 {
    let (i, e) = (g % 4, g / 4);
    let exponent = match k {
        0 => 0,
        1 => e,
        2 => i,
        _ => i + e,
    };
    if exponent % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `ρ(xⁱyᵉ) = ρ(x)ⁱρ(y)ᵉ` with `ρ(x) = [[0,−1],[1,0]]`, `ρ(y) = diag(1,−1)`.
pub fn d4_rho(g: usize) -> [[f64; 2]; 2] {
    let (i, e) = (g % 4, g / 4);
    let rx = [[0.0, -1.0], [1.0, 0.0]];
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for _ in 0..i {
        m = mat2(&m, &rx);
    }
    if e == 1 {
        m = mat2(&m, &[[1.0, 0.0], [0.0, -1.0]]);
    }
    m
}

fn mat2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Forward transform (characters and ρ are real, so all coefficients are
/// constants and the transform is free).
pub fn d4_forward(a: &[TrackedScalar], ctx: &mut CountContext) -> Result<D4Blocks> {
    if a.len() != 8 {
        return Err(Error::DimensionMismatch(format!("D4 elements have 8 coefficients, got {}", a.len())));
    }
    // Structural zeros (embedded matrices fill half the group) are skipped.
    let support: Vec<usize> = (0..8).filter(|&g| !a[g].is_structural_zero()).collect();
    let items: Vec<TrackedScalar> = support.iter().map(|&g| a[g]).collect();
    let mut weigh = |w: &dyn Fn(usize) -> f64| {
        let coeffs: Vec<Complex64> = support.iter().map(|&g| real(w(g))).collect();
        combine(&coeffs, &items, ctx).unwrap_or_else(TrackedScalar::zero)
    };
    let chars = [0, 1, 2, 3].map(|k| weigh(&|g| d4_character(k, g)));
    let block = [0, 1].map(|r| [0, 1].map(|c| weigh(&|g| d4_rho(g)[r][c])));
    Ok(D4Blocks { chars, block })
}

/// `coef_g = (1/8)[Σ_k χ_k(g⁻¹)P_k + 2·tr(ρ(g⁻¹)Q)]`.
pub fn d4_inverse(blocks: &D4Blocks, ctx: &mut CountContext) -> Vec<TrackedScalar> {
    let g = dihedral8();
    let items: Vec<TrackedScalar> = blocks
        .chars
        .iter()
        .copied()
        .chain(blocks.block.iter().flatten().copied())
        .collect();
    (0..8)
        .map(|h| {
            let hi = g.inverse(h);
            let rho = d4_rho(hi);
            let mut coeffs: Vec<Complex64> = (0..4).map(|k| real(d4_character(k, hi) / 8.0)).collect();
            // tr(ρQ) = Σ_{r,c} ρ[c][r]·Q[r][c]
            for r in 0..2 {
                for c in 0..2 {
                    coeffs.push(real(2.0 * rho[c][r] / 8.0));
                }
            }
            combine_or_zero(&coeffs, &items, ctx)
        })
        .collect()
}
