use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::{
    box_points, LatticePoint, LatticeState, ParamError, Reduced2d, StepError, TodaParams,
};
use crate::laurent::{LaurentPoly, VarTable};
use crate::scalar::LatticeValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("reduction needs both groups nonempty: {0}")]
    DegenerateGroups(#[from] ParamError),
    #[error("initial data not class-constant: layer {layer} differs at {point}")]
    NotClassConstant { layer: u32, point: LatticePoint },
    #[error("full evolution stopped: {0}")]
    Full(StepError),
    #[error("reduced evolution stopped: {0}")]
    Reduced(StepError),
}

/// The class `(m, n) = (sum_{i<=a} n_i, sum_{j>a} n_j)` of a lattice point.
pub fn class_of(params: &TodaParams, n: &LatticePoint) -> LatticePoint {
    let a = params.a();
    LatticePoint(vec![n.0[..a].iter().sum(), n.0[a..].iter().sum()])
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub reduced: Reduced2d,
    pub t_max: u32,
    /// Radius of the two-dimensional window that covers every class.
    pub reduced_radius: i64,
    pub compared: usize,
    pub mismatches: Vec<(u32, LatticePoint)>,
    pub consistent: bool,
}

/// Evolves the full system from data constant on classes and the reduced
/// two-dimensional system from the same class data, then compares every
/// computed full-lattice value with the reduced value at its class.
pub fn reduction_consistency<S: LatticeValue>(
    params: &TodaParams,
    radius: i64,
    t_max: u32,
    class_layer0: impl Fn(&LatticePoint) -> S,
    class_layer1: impl Fn(&LatticePoint) -> S,
) -> Result<ReductionReport, ReductionError> {
    let reduced = params.reduce_to_2d();
    let params2 = reduced.to_params()?;
    let reduced_radius = radius * params.a().max(params.b()) as i64;

    let full = LatticeState::from_fn(
        params.clone(),
        radius,
        |n| class_layer0(&class_of(params, n)),
        |n| class_layer1(&class_of(params, n)),
    )
    .evolve(t_max);
    if let Some(e) = full.halted {
        return Err(ReductionError::Full(e));
    }
    let small = LatticeState::from_fn(params2, reduced_radius, &class_layer0, &class_layer1).evolve(t_max);
    if let Some(e) = small.halted {
        return Err(ReductionError::Reduced(e));
    }

    let mut compared = 0;
    let mut mismatches = Vec::new();
    for layer in &full.layers {
        let other = small.layer(layer.t).expect("same number of steps");
        for (n, v) in &layer.values {
            compared += 1;
            if other.get(&class_of(params, n)) != Some(v) {
                mismatches.push((layer.t, n.clone()));
            }
        }
    }
    Ok(ReductionReport {
        reduced,
        t_max,
        reduced_radius,
        compared,
        consistent: mismatches.is_empty(),
        mismatches,
    })
}

/// Symbolic variant: one variable `tau[t;m,n]` per class and initial layer.
pub fn reduction_consistency_symbolic(
    params: &TodaParams,
    radius: i64,
    t_max: u32,
    table: &mut VarTable,
) -> Result<ReductionReport, ReductionError> {
    let reduced_radius = radius * params.a().max(params.b()) as i64;
    for t in 0..2 {
        for c in box_points(2, reduced_radius) {
            table.tau(t, &c.0);
        }
    }
    let table = &*table;
    let var = |t: i64, c: &LatticePoint| {
        LaurentPoly::var(table.lookup(&crate::VarName::tau(t, &c.0)).expect("registered"))
    };
    reduction_consistency(params, radius, t_max, |c| var(0, c), |c| var(1, c))
}

/// Collapses point-wise initial data to class data, failing if two points of
/// one class carry different values.
pub fn class_data<S: Clone + PartialEq>(
    params: &TodaParams,
    layer: u32,
    data: &BTreeMap<LatticePoint, S>,
) -> Result<BTreeMap<LatticePoint, S>, ReductionError> {
    let mut out: BTreeMap<LatticePoint, S> = BTreeMap::new();
    for (n, v) in data {
        let c = class_of(params, n);
        match out.get(&c) {
            Some(existing) if existing != v => {
                return Err(ReductionError::NotClassConstant {
                    layer,
                    point: n.clone(),
                })
            }
            Some(_) => {}
            None => {
                out.insert(c, v.clone());
            }
        }
    }
    Ok(out)
}
