//! What a "multiplication" means inside a kernel.
//!
//! Every fast kernel is written once, generically over a [`Bilinear`]
//! engine: the kernel forms linear combinations of parameters (`Left`) and of
//! input entries (`Right`), hands pairs to `product`, and linearly combines
//! the results (`Out`). Swapping the engine changes what runs:
//!
//! * [`ScalarProduct`]: ordinary counted arithmetic.
//! * `BlockProduct` (in `multilevel`): each product is an inner structured
//!   matvec, which is how multilevel matrices nest.
//! * [`TraceProduct`]: symbolic; records each product's two linear forms and
//!   returns a fresh basis vector, yielding the rank-one terms.

use std::cell::RefCell;

use num_complex::Complex64;

use crate::arith::{self, CountContext, Linear, TrackedScalar};
use crate::error::Result;

pub trait Bilinear {
    type Left: Linear;
    type Right: Linear;
    type Out: Linear;

    fn product(&self, a: &Self::Left, b: &Self::Right, ctx: &mut CountContext) -> Result<Self::Out>;

    fn zero_out(&self) -> Self::Out;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScalarProduct;

impl Bilinear for ScalarProduct {
    type Left = TrackedScalar;
    type Right = TrackedScalar;
    type Out = TrackedScalar;

    fn product(&self, a: &TrackedScalar, b: &TrackedScalar, ctx: &mut CountContext) -> Result<TrackedScalar> {
        Ok(arith::mul(*a, *b, ctx))
    }

    fn zero_out(&self) -> TrackedScalar {
        TrackedScalar::zero()
    }
}

/// Coefficient vector of a linear form. Shorter vectors are implicitly
/// zero-padded, so forms over a growing index set combine freely.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Form(pub Vec<Complex64>);

impl Form {
    pub fn unit(index: usize, len: usize) -> Form {
        let mut v = vec![Complex64::new(0.0, 0.0); len.max(index + 1)];
        v[index] = Complex64::new(1.0, 0.0);
        Form(v)
    }

    pub fn coefficient(&self, index: usize) -> Complex64 {
        self.0.get(index).copied().unwrap_or_default()
    }

    fn zip_with(&self, other: &Form, op: impl Fn(Complex64, Complex64) -> Complex64) -> Form {
        let len = self.0.len().max(other.0.len());
        Form((0..len).map(|i| op(self.coefficient(i), other.coefficient(i))).collect())
    }
}

impl Linear for Form {
    fn zero_like(&self) -> Self {
        Form(Vec::new())
    }

    fn add(&self, other: &Self, _ctx: &mut CountContext) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    fn sub(&self, other: &Self, _ctx: &mut CountContext) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn neg(&self) -> Self {
        Form(self.0.iter().map(|a| -a).collect())
    }

    fn scale(&self, c: Complex64, _ctx: &mut CountContext) -> Self {
        Form(self.0.iter().map(|a| c * a).collect())
    }
}

/// Records `(u, v)` for each product; the r-th product evaluates to `e_r`.
#[derive(Debug, Default)]
pub struct TraceProduct {
    terms: RefCell<Vec<(Form, Form)>>,
}

impl TraceProduct {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_terms(self) -> Vec<(Form, Form)> {
        self.terms.into_inner()
    }
}

impl Bilinear for TraceProduct {
    type Left = Form;
    type Right = Form;
    type Out = Form;

    fn product(&self, a: &Form, b: &Form, _ctx: &mut CountContext) -> Result<Form> {
        let mut terms = self.terms.borrow_mut();
        terms.push((a.clone(), b.clone()));
        Ok(Form::unit(terms.len() - 1, terms.len()))
    }

    fn zero_out(&self) -> Form {
        Form(Vec::new())
    }
}
