use thiserror::Error;

use crate::laurent::VarId;

/// Failures of the exact Laurent polynomial operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero to zeroth power")]
    ZeroToZerothPower,
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible")]
    NotDivisible,
    #[error("non-Laurent substitution: negative power of {var} meets a non-unit replacement")]
    NonLaurentSubstitution { var: VarId },
    #[error("zero to negative power")]
    ZeroToNegativePower,
    #[error("variable {0} has no assigned value")]
    Unassigned(VarId),
    #[error("{0} is undefined for the zero polynomial")]
    ZeroArgument(&'static str),
}
