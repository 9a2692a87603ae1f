//! The minimal field interface shared by the exact linear algebra routines.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field. Method names avoid clashing with `std::ops`.
pub trait Field: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` exactly when `self` is zero.
    fn inverse(&self) -> Option<Self>;
    /// Rough size of the element; Gaussian elimination prefers light pivots.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn weight(&self) -> usize {
        (self.numer().abs().bits() + self.denom().bits()) as usize
    }
}
