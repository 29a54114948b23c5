//! Scalar backends.
//!
//! Two interchangeable field implementations back every matrix in the crate:
//! the exact tower `Q(sqrt d1, ..., sqrt dk)(pi)` ([`ExactReal`], [`ExactComplex`])
//! and arbitrary-precision binary floating complex numbers ([`BigComplex`]).
//! Generic code is written against [`Field`].

mod bignum;
mod exact;
mod expr;
mod hexfloat;
mod multiquad;
mod numtheory;
mod pipoly;

pub use bignum::{to_numeric, BigComplex, MIN_PREC};
pub(crate) use bignum::{bf_from_bigint, bf_log2_abs, bf_round_to_bigint, bf_zero, RM};
pub use exact::{monomial_coords, ExactComplex, ExactReal, MonomialKey};
pub use expr::{Expr, ScalarLiteral};
pub use hexfloat::{hex_bigfloat, hex_f64, parse_hex_f64};
pub use multiquad::{MultiquadElem, Surd, SurdBasis};
pub use numtheory::{lcm_all, prime_factors, squarefree_decompose};
pub use pipoly::PiPoly;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Field operations shared by both scalar backends.
///
/// Exact backends answer [`Field::is_zero`] exactly. The numeric backend only
/// reports a literal zero; tolerance decisions live with the numeric algorithms.
pub trait Field: Clone + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;

    /// Preference when choosing an elimination pivot: larger is better,
    /// `f64::NEG_INFINITY` for zero.
    fn pivot_weight(&self) -> f64;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        for _ in 0..v.unsigned_abs() {
            acc = acc.add(&one);
        }
        if v < 0 {
            acc.neg()
        } else {
            acc
        }
    }
}

/// A field that is a complex extension of a real subfield.
pub trait ComplexField: Field {
    type Real: Field;

    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn from_real_parts(re: Self::Real, im: Self::Real) -> Self;
    /// `2 pi i`, at the working precision of `self` for the numeric backend.
    fn two_pi_i_like(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn pivot_weight(&self) -> f64 {
        if Zero::is_zero(self) {
            f64::NEG_INFINITY
        } else {
            // prefer small height to limit coefficient growth
            -((self.numer().bits() + self.denom().bits()) as f64)
        }
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
}

/// Double-precision complex numbers, used for orbit sampling.
impl Field for num_complex::Complex64 {
    fn zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        num_complex::Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(1.0 / self)
        }
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn pivot_weight(&self) -> f64 {
        self.norm().log2()
    }
    fn from_i64(v: i64) -> Self {
        num_complex::Complex64::new(v as f64, 0.0)
    }
}
