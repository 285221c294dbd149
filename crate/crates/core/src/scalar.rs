//! Scalar and lattice-value abstractions shared by the symbolic and numeric
//! code paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

use crate::laurent::{DegreeStats, LaurentPoly};

/// A field the evaluation and numeric evolution can run over.
pub trait Scalar: Num + Clone + Debug + PartialOrd + Send + Sync {
    fn from_bigint(c: &BigInt) -> Self;
    fn is_integral(&self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    fn from_bigint(c: &BigInt) -> Self {
        BigRational::from_integer(c.clone())
    }
    fn is_integral(&self) -> bool {
        self.is_integer()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn from_bigint(c: &BigInt) -> Self {
        c.to_f64().unwrap_or(f64::NAN)
    }
    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_bigint(c: &BigInt) -> Self {
        c.to_f32().unwrap_or(f32::NAN)
    }
    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Why a lattice division failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivFailure {
    /// The quotient is not in the value ring (a Laurent-property violation).
    NotDivisible,
    /// The divisor vanished.
    ByZero,
}

/// Values a lattice can be evolved over: Laurent polynomials (symbolic mode)
/// or any [`Scalar`] (numeric mode).
pub trait LatticeValue: Clone + Debug + PartialEq + Send + Sync {
    fn one() -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn pow(&self, e: u32) -> Self;
    fn try_div(&self, divisor: &Self) -> Result<Self, DivFailure>;
    fn degree_stats(&self) -> Option<DegreeStats> {
        None
    }
    /// Size used by term budgets; numeric values count as one term.
    fn term_count(&self) -> usize {
        1
    }
}

impl<S: Scalar> LatticeValue for S {
    fn one() -> Self {
        S::one()
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn pow(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }
    fn try_div(&self, divisor: &Self) -> Result<Self, DivFailure> {
        if divisor.is_zero() {
            Err(DivFailure::ByZero)
        } else {
            Ok(self.clone() / divisor.clone())
        }
    }
}

impl LatticeValue for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn mul(&self, rhs: &Self) -> Self {
        LaurentPoly::mul(self, rhs)
    }
    fn add(&self, rhs: &Self) -> Self {
        LaurentPoly::add(self, rhs)
    }
    fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return LaurentPoly::one();
        }
        LaurentPoly::pow(self, e).expect("positive exponent")
    }
    fn try_div(&self, divisor: &Self) -> Result<Self, DivFailure> {
        use crate::error::AlgebraError;
        match crate::laurent::exact_div(self, divisor) {
            Ok(q) => Ok(q),
            Err(AlgebraError::DivisionByZero) => Err(DivFailure::ByZero),
            Err(_) => Err(DivFailure::NotDivisible),
        }
    }
    fn term_count(&self) -> usize {
        self.len()
    }
    fn degree_stats(&self) -> Option<DegreeStats> {
        Some(LaurentPoly::degree_stats(self))
    }
}
