//! Floating-point abstraction and compensated arithmetic.
//!
//! Everything downstream of the value table is generic over [`Scalar`], so the
//! same scoring code runs on `f32` and `f64`. The compensated types in here
//! exist because window scores are long signed sums: cancellation near zero
//! would otherwise eat the precision the matcher's tolerance relies on.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable for letter values and window scores.
///
/// Blanket-implemented for every type with the required numeric traits; in
/// practice that means `f32` and `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Running sum with Neumaier's correction term.
///
/// The running error stays within a couple of ulps of the true sum regardless
/// of sign pattern, which a plain left-to-right fold cannot promise.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CompensatedSum<S> {
    sum: S,
    correction: S,
}

impl<S: Scalar> CompensatedSum<S> {
    pub(crate) fn new() -> Self {
        CompensatedSum {
            sum: S::zero(),
            correction: S::zero(),
        }
    }

    pub(crate) fn add(&mut self, x: S) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.correction = self.correction + ((self.sum - t) + x);
        } else {
            self.correction = self.correction + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> S {
        self.sum + self.correction
    }
}

/// Unevaluated sum of two scalars, `hi + lo`, with `|lo| <= ulp(hi) / 2`.
///
/// Used as an extended-precision accumulator in the rolling scorers; roughly
/// doubles the effective mantissa. Operations below are the classical
/// error-free transformations (two-sum, two-product via fused multiply-add).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TwoFloat<S> {
    pub(crate) hi: S,
    pub(crate) lo: S,
}

impl<S: Scalar> TwoFloat<S> {
    pub(crate) fn zero() -> Self {
        TwoFloat {
            hi: S::zero(),
            lo: S::zero(),
        }
    }

    /// Exact sum of two scalars as a hi/lo pair (Knuth's two-sum).
    pub(crate) fn two_sum(a: S, b: S) -> Self {
        let s = a + b;
        let v = s - a;
        let e = (a - (s - v)) + (b - v);
        TwoFloat { hi: s, lo: e }
    }

    /// Exact product of two scalars as a hi/lo pair (requires fused
    /// multiply-add, which both `f32` and `f64` provide).
    pub(crate) fn two_prod(a: S, b: S) -> Self {
        let p = a * b;
        let e = a.mul_add(b, -p);
        TwoFloat { hi: p, lo: e }
    }

    fn renorm(hi: S, lo: S) -> Self {
        let s = hi + lo;
        let e = lo - (s - hi);
        TwoFloat { hi: s, lo: e }
    }

    pub(crate) fn add(self, other: TwoFloat<S>) -> Self {
        let s = TwoFloat::two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        TwoFloat::renorm(s.hi, lo)
    }

    pub(crate) fn sub(self, other: TwoFloat<S>) -> Self {
        self.add(other.neg())
    }

    pub(crate) fn neg(self) -> Self {
        TwoFloat {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub(crate) fn mul_scalar(self, x: S) -> Self {
        let p = TwoFloat::two_prod(self.hi, x);
        TwoFloat::renorm(p.hi, p.lo + self.lo * x)
    }

    pub(crate) fn div_scalar(self, x: S) -> Self {
        let q1 = self.hi / x;
        let r = self.sub(TwoFloat::two_prod(q1, x));
        let q2 = (r.hi + r.lo) / x;
        TwoFloat::renorm(q1, q2)
    }

    pub(crate) fn value(self) -> S {
        self.hi + self.lo
    }
}
