//! Error-free transformations and a double-double scalar.
//!
//! Long fixed-step integrations accumulate rounding error at a rate that
//! hides the truncation error of the integrator. The integrator keeps its
//! state as an unevaluated sum `hi + lo`, and conserved quantities are
//! evaluated in double-double arithmetic.

use core::ops::{Add, Mul, Neg, Sub};
#[allow(unused_imports)]
use num_traits::Float;

/// `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Requires `|a| >= |b|`.
#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// `a * b = p + e` exactly (barring overflow).
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum of two doubles carrying roughly 106 bits of significand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = fast_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

/// Arithmetic shared by `f64` and [`DoubleDouble`]; lets quadratic forms be
/// evaluated at either precision.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + From<f64>
{
    fn zero() -> Self {
        Self::from(0.0)
    }
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for DoubleDouble {
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
}

/// Fixed-length vector stored as `hi + lo` per component; used as a
/// compensated accumulator for time stepping.
#[derive(Debug, Clone, PartialEq)]
pub struct CompensatedVec {
    pub hi: alloc::vec::Vec<f64>,
    pub lo: alloc::vec::Vec<f64>,
}

impl CompensatedVec {
    pub fn from_slice(v: &[f64]) -> Self {
        CompensatedVec { hi: v.to_vec(), lo: alloc::vec![0.0; v.len()] }
    }

    /// `self += scale * inc`, with the rounding error of the update retained in `lo`.
    pub fn add_scaled(&mut self, scale: f64, inc: &[f64]) {
        for ((h, l), &d) in self.hi.iter_mut().zip(self.lo.iter_mut()).zip(inc) {
            let (s, e) = two_sum(*h, scale * d);
            let (s, e) = fast_two_sum(s, *l + e);
            *h = s;
            *l = e;
        }
    }

    pub fn to_double_double(&self) -> alloc::vec::Vec<DoubleDouble> {
        self.hi.iter().zip(&self.lo).map(|(&h, &l)| DoubleDouble::new(h, l)).collect()
    }
}
