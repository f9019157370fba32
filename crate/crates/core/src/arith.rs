//! Counted complex arithmetic.
//!
//! Every scalar carries a [`ScalarKind`]: `Constant` for values fixed by the
//! algorithm (twiddle factors, structural zeros, 1/n) and `Variable` for
//! anything derived from the inputs. Only `Variable × Variable` products are
//! bilinear multiplications; products involving a constant are scalar
//! multiplications and additions are free. All counters live in an explicit
//! [`CountContext`]; there is no global state.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default magnitude below which a divisor is treated as zero.
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Constant,
    Variable,
}

impl ScalarKind {
    fn join(self, other: ScalarKind) -> ScalarKind {
        if self == ScalarKind::Variable || other == ScalarKind::Variable {
            ScalarKind::Variable
        } else {
            ScalarKind::Constant
        }
    }
}

/// A complex value tagged as constant or variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedScalar {
    pub value: Complex64,
    pub kind: ScalarKind,
}

impl TrackedScalar {
    pub fn new(value: Complex64, kind: ScalarKind) -> Self {
        Self { value, kind }
    }

    pub fn constant(value: Complex64) -> Self {
        Self::new(value, ScalarKind::Constant)
    }

    pub fn variable(value: Complex64) -> Self {
        Self::new(value, ScalarKind::Variable)
    }

    pub fn real_constant(re: f64) -> Self {
        Self::constant(Complex64::new(re, 0.0))
    }

    pub fn real_variable(re: f64) -> Self {
        Self::variable(Complex64::new(re, 0.0))
    }

    pub fn zero() -> Self {
        Self::real_constant(0.0)
    }

    pub fn is_variable(&self) -> bool {
        self.kind == ScalarKind::Variable
    }

    /// True for a constant that is exactly zero. Kernels and the naive
    /// product skip these structurally.
    pub fn is_structural_zero(&self) -> bool {
        self.kind == ScalarKind::Constant && self.value == Complex64::new(0.0, 0.0)
    }
}

impl fmt::Display for TrackedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            ScalarKind::Constant => "const",
            ScalarKind::Variable => "var",
        };
        write!(f, "{}({})", tag, self.value)
    }
}

/// Snapshot of the four tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub bilinear_mults: u64,
    pub divisions: u64,
    pub scalar_mults: u64,
    pub additions: u64,
}

impl Counts {
    /// Counter increase from `earlier` to `self`.
    pub fn since(&self, earlier: &Counts) -> Counts {
        Counts {
            bilinear_mults: self.bilinear_mults - earlier.bilinear_mults,
            divisions: self.divisions - earlier.divisions,
            scalar_mults: self.scalar_mults - earlier.scalar_mults,
            additions: self.additions - earlier.additions,
        }
    }
}

/// Mutable tally for one computation. Counters only ever increase.
#[derive(Debug, Clone)]
pub struct CountContext {
    counts: Counts,
    zero_threshold: f64,
}

impl Default for CountContext {
    fn default() -> Self {
        Self::new()
    }
}

impl CountContext {
    pub fn new() -> Self {
        Self {
            counts: Counts::default(),
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
        }
    }

    pub fn with_zero_threshold(zero_threshold: f64) -> Self {
        Self {
            counts: Counts::default(),
            zero_threshold,
        }
    }

    pub fn bilinear_mults(&self) -> u64 {
        self.counts.bilinear_mults
    }

    pub fn divisions(&self) -> u64 {
        self.counts.divisions
    }

    pub fn scalar_mults(&self) -> u64 {
        self.counts.scalar_mults
    }

    pub fn additions(&self) -> u64 {
        self.counts.additions
    }

    pub fn zero_threshold(&self) -> f64 {
        self.zero_threshold
    }

    pub fn snapshot(&self) -> Counts {
        self.counts
    }
}

/// Product with counting: `Variable × Variable` is one bilinear
/// multiplication, anything involving a constant is a scalar multiplication.
pub fn mul(a: TrackedScalar, b: TrackedScalar, ctx: &mut CountContext) -> TrackedScalar {
    let kind = a.kind.join(b.kind);
    if a.is_variable() && b.is_variable() {
        ctx.counts.bilinear_mults += 1;
    } else {
        ctx.counts.scalar_mults += 1;
    }
    TrackedScalar::new(a.value * b.value, kind)
}

pub fn add(a: TrackedScalar, b: TrackedScalar, ctx: &mut CountContext) -> TrackedScalar {
    ctx.counts.additions += 1;
    TrackedScalar::new(a.value + b.value, a.kind.join(b.kind))
}

pub fn sub(a: TrackedScalar, b: TrackedScalar, ctx: &mut CountContext) -> TrackedScalar {
    ctx.counts.additions += 1;
    TrackedScalar::new(a.value - b.value, a.kind.join(b.kind))
}

/// Negation is free.
pub fn neg(a: TrackedScalar) -> TrackedScalar {
    TrackedScalar::new(-a.value, a.kind)
}

/// Division. A variable divisor counts as a division, a constant divisor as a
/// scalar multiplication (by its reciprocal).
pub fn div(a: TrackedScalar, b: TrackedScalar, ctx: &mut CountContext) -> Result<TrackedScalar> {
    let magnitude = b.value.norm();
    if magnitude <= ctx.zero_threshold {
        return Err(Error::DivisionByZero {
            magnitude,
            threshold: ctx.zero_threshold,
        });
    }
    if b.is_variable() {
        ctx.counts.divisions += 1;
    } else {
        ctx.counts.scalar_mults += 1;
    }
    Ok(TrackedScalar::new(a.value / b.value, a.kind.join(b.kind)))
}

/// Multiplies by a constant. Shorthand for `mul(constant(c), a)`.
pub fn scale(c: Complex64, a: TrackedScalar, ctx: &mut CountContext) -> TrackedScalar {
    mul(TrackedScalar::constant(c), a, ctx)
}

/// Values that support the free (non-bilinear) operations: sums and scaling
/// by constants. Transforms and kernels are written against this trait so the
/// same code runs on scalars, on blocks of scalars (multilevel nesting) and on
/// symbolic linear forms (decomposition extraction).
pub trait Linear: Clone {
    /// A zero of the same shape, structurally constant.
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self, ctx: &mut CountContext) -> Self;
    fn sub(&self, other: &Self, ctx: &mut CountContext) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: Complex64, ctx: &mut CountContext) -> Self;
}

impl Linear for TrackedScalar {
    fn zero_like(&self) -> Self {
        TrackedScalar::zero()
    }

    fn add(&self, other: &Self, ctx: &mut CountContext) -> Self {
        add(*self, *other, ctx)
    }

    fn sub(&self, other: &Self, ctx: &mut CountContext) -> Self {
        sub(*self, *other, ctx)
    }

    fn neg(&self) -> Self {
        neg(*self)
    }

    fn scale(&self, c: Complex64, ctx: &mut CountContext) -> Self {
        scale(c, *self, ctx)
    }
}

/// `Σ coeffs[j]·items[j]`, skipping zero coefficients. Returns `None` when
/// every coefficient is zero (or `items` is empty).
pub fn combine<L: Linear>(coeffs: &[Complex64], items: &[L], ctx: &mut CountContext) -> Option<L> {
    let mut acc: Option<L> = None;
    for (c, item) in coeffs.iter().zip(items) {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let term = if *c == Complex64::new(1.0, 0.0) {
            item.clone()
        } else if *c == Complex64::new(-1.0, 0.0) {
            item.neg()
        } else {
            item.scale(*c, ctx)
        };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term, ctx),
        });
    }
    acc
}

/// Like [`combine`] but falls back to `zero_like` of the first item.
pub fn combine_or_zero<L: Linear>(coeffs: &[Complex64], items: &[L], ctx: &mut CountContext) -> L {
    combine(coeffs, items, ctx).unwrap_or_else(|| items[0].zero_like())
}
