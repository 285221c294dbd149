//! Windowed evolution of the `(a+b)`-dimensional Toda-type recurrence
//!
//! ```text
//! tau_{t+1,n} tau_{t-1,n} = prod_{i<=a} tau_{t,n+e_i}^{k_i} tau_{t,n-e_i}^{l_i}
//!                         + prod_{i>a}  tau_{t,n+e_i}^{k_i} tau_{t,n-e_i}^{l_i}
//! ```
//!
//! together with the Laurent/coprimeness checks, degree-growth measurement,
//! the homogeneous scalar recurrence and the reduction to two dimensions.

mod coprime;
mod csequence;
mod degree;
mod lattice;
mod line;
mod params;
mod reduce;

pub use coprime::{
    coprimeness_matrix, pair_gcd, CoprimenessReport, Iterate, PairResult, PairVerdict,
    DEFAULT_PAIR_TERM_BUDGET,
};
pub use csequence::{c_sequence, c_sequence_factored, Atom, CSequence, FactoredCSequence};
pub use degree::{degree_growth, DegreeGrowth, GrowthError, LayerGrowth, SpanRatio};
pub use lattice::{
    box_points, init_all_ones, init_numeric, init_symbolic, random_rational_layers,
    valid_half_width, Evolution, InitError, LatticePoint, LatticeState, Layer, PointStats,
    StepError, StepOptions, StepReport,
};
pub use line::{line_image_evolution, span_lower_bounds, LineImage, SpanLowerBound};
pub use params::{GcdCondition, ParamError, Reduced2d, TodaParams};
pub use reduce::{
    class_data, class_of, reduction_consistency, reduction_consistency_symbolic, ReductionError,
    ReductionReport,
};
