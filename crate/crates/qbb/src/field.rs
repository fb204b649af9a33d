//! The scalar abstraction used by the generic linear algebra and the
//! perfect-basis toolkit. Implemented for `BigRational` and `ScalarQ`.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::qrat::ScalarQ;

pub trait Field: Zero + One + Clone + PartialEq + Debug + Send + Sync + 'static {
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    /// Panics on division by zero; callers only divide by pivots.
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_rational(c: &BigRational) -> Self;
    /// A rough size measure used to prefer simple pivots.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for BigRational {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(c: &BigRational) -> Self {
        c.clone()
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for ScalarQ {
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_rational(c: &BigRational) -> Self {
        ScalarQ::from_rational(c.clone())
    }
    fn weight(&self) -> usize {
        let n = self.numerator().coeffs().len();
        let d = self.denominator().coeffs().len();
        4 * (n + d) + if self.is_laurent() { 0 } else { 8 }
    }
}
