//! The coefficient contract shared by the exact and the floating-point paths.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{ExactRational, QuadExt};

/// Moduli below this count as zero on the floating-point path.
pub const COMPLEX_ZERO_TOL: f64 = 1e-14;

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &ExactRational) -> Self;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;

    /// Exact zero test.
    fn is_zero(&self) -> bool;

    /// Zero test used for poles and singular denominators: exact for
    /// `QuadExt`, `|z| < 1e-14` for complex doubles.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_complex(&self) -> Complex64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&crate::exact::rational::int(n))
    }
}

impl Scalar for QuadExt {
    fn zero() -> Self {
        QuadExt::zero()
    }
    fn one() -> Self {
        QuadExt::one()
    }
    fn from_rational(r: &ExactRational) -> Self {
        QuadExt::rational(r.clone())
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        QuadExt::checked_div(self, rhs)
    }
    fn is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        QuadExt::to_complex(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(r: &ExactRational) -> Self {
        Complex64::new(crate::exact::rational::to_f64(r), 0.0)
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.re == 0.0 && rhs.im == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_negligible(&self) -> bool {
        self.norm() < COMPLEX_ZERO_TOL
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
