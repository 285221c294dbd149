//! Exact symbolic engine for multi-dimensional Toda-type bilinear recurrences
//! and the Laurent phenomenon seed mutations that realise them.

pub mod error;
pub mod laurent;
mod modp;
pub mod scalar;
pub mod lp;
pub mod toda;

pub use error::AlgebraError;
pub use laurent::{DegreeStats, LaurentPoly, Monomial, VarId, VarName, VarTable};
pub use scalar::{LatticeValue, Scalar};

/// Exact rational scalar used by numeric evolution.
pub type Rational = num_rational::BigRational;

/// Lattice state over symbolic Laurent polynomial values.
pub type SymbolicLattice = toda::LatticeState<LaurentPoly>;
/// Lattice state over exact rationals.
pub type RationalLattice = toda::LatticeState<Rational>;
/// Lattice state over `f64`, for quick exploratory runs.
pub type FloatLattice = toda::LatticeState<f64>;

/// Crate version, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
