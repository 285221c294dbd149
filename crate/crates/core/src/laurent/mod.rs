//! Exact sparse arithmetic for multivariate Laurent polynomials over the integers.

mod division;
mod gcd;
mod monomial;
mod poly;
mod stats;
mod subst;
pub mod text;
mod vars;

pub use division::{exact_div, monomial_content, polynomial_part};
pub(crate) use gcd::gcd_of_parts;
pub use gcd::{canonical, gcd, remove_common_factors};
pub use monomial::{Monomial, VarId};
pub use poly::LaurentPoly;
pub use stats::DegreeStats;
pub use subst::{eval_at, substitute};
pub use text::{parse, serialize, ParseError};
pub use vars::{VarName, VarTable};
