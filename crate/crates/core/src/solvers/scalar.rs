use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

/// Field arithmetic the simplex method needs. Exact for [`Rational`];
/// `f64` compares against a fixed tolerance.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero_s(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn to_f64_s(&self) -> f64;
    /// Relative primal-dual gap accepted at termination.
    fn duality_tolerance() -> f64;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        num_traits::One::one()
    }

    fn is_zero_s(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn is_neg(&self) -> bool {
        self.is_negative()
    }

    fn to_f64_s(&self) -> f64 {
        rational::to_f64(self)
    }

    fn duality_tolerance() -> f64 {
        0.0
    }
}

const F64_TOL: f64 = 1e-10;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn is_zero_s(&self) -> bool {
        self.abs() <= F64_TOL
    }

    fn is_pos(&self) -> bool {
        *self > F64_TOL
    }

    fn is_neg(&self) -> bool {
        *self < -F64_TOL
    }

    fn to_f64_s(&self) -> f64 {
        *self
    }

    /// Float solves only propose candidates (every bound is re-verified
    /// exactly), and ill-conditioned tableaus lose several digits.
    fn duality_tolerance() -> f64 {
        1e-6
    }
}
