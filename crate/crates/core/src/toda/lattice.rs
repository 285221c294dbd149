use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::TodaParams;
use crate::laurent::{DegreeStats, LaurentPoly, VarTable};
use crate::scalar::{DivFailure, LatticeValue, Scalar};
use crate::Rational;

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(d: usize) -> Self {
        LatticePoint(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn shifted(&self, axis: usize, delta: i64) -> Self {
        let mut c = self.0.clone();
        c[axis] += delta;
        LatticePoint(c)
    }

    pub fn translate(&self, by: &LatticePoint) -> Self {
        LatticePoint(self.0.iter().zip(&by.0).map(|(a, b)| a + b).collect())
    }

    /// Chebyshev norm.
    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// All points of `[-w, w]^d` in lexicographic order.
pub fn box_points(d: usize, w: i64) -> Vec<LatticePoint> {
    if w < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![-w; d];
    loop {
        out.push(LatticePoint(cur.clone()));
        let mut axis = d;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if cur[axis] < w {
                cur[axis] += 1;
                break;
            }
            cur[axis] = -w;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepError {
    #[error("window exhausted: layer {t} would have an empty valid region")]
    WindowExhausted { t: u32 },
    #[error("Laurent violation at (t={t}, n={point})")]
    LaurentViolation { t: u32, point: LatticePoint },
    #[error("singular value: division by zero at (t={t}, n={point})")]
    SingularValue { t: u32, point: LatticePoint },
    #[error("term budget {budget} exceeded at (t={t}, n={point}): {estimate} term products or layer terms needed")]
    BudgetExceeded {
        t: u32,
        point: LatticePoint,
        estimate: usize,
        budget: usize,
    },
}

impl StepError {
    /// Whether the error refutes the Laurent property (as opposed to a
    /// resource limit).
    pub fn is_violation(&self) -> bool {
        matches!(self, StepError::LaurentViolation { .. } | StepError::SingularValue { .. })
    }
}

/// Limits on a single step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StepOptions {
    /// Stop when a single multiplication in a right-hand side would form
    /// more than this many term products, or when the values of one layer
    /// would hold more than this many terms in total. Bounds both the work
    /// per point and the memory per layer. Numeric values count as one term.
    pub term_budget: Option<usize>,
    /// Only compute the points the window center at this time depends on:
    /// layer `t` within l1-distance `target - t` of the origin.
    pub center_target: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitError {
    #[error("no initial value for layer {layer} at {point}")]
    MissingPoint { layer: u32, point: LatticePoint },
    #[error("zero initial value for layer {layer} at {point}")]
    ZeroValue { layer: u32, point: LatticePoint },
}

/// One time slice: values on the box `[-half_width, half_width]^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer<S> {
    pub t: u32,
    pub half_width: i64,
    pub values: BTreeMap<LatticePoint, S>,
}

impl<S> Layer<S> {
    pub fn get(&self, p: &LatticePoint) -> Option<&S> {
        self.values.get(p)
    }
}

/// Two consecutive time layers on a finite window with light-cone shrinkage.
///
/// Layer `t` is valid on `[-R + (t-1), R - (t-1)]^d` (layer 0 on the full
/// window); nothing outside the region the initial data determines is
/// ever produced.
#[derive(Clone, Debug)]
pub struct LatticeState<S> {
    params: TodaParams,
    radius: i64,
    prev: Layer<S>,
    curr: Layer<S>,
}

/// Valid half-width of layer `t` for a window of radius `radius`.
pub fn valid_half_width(radius: i64, t: u32) -> i64 {
    radius - (t as i64 - 1).max(0)
}

impl<S: LatticeValue> LatticeState<S> {
    /// Builds a state at `t = 1` from two layers given as functions of the point.
    pub fn from_fn(
        params: TodaParams,
        radius: i64,
        mut layer0: impl FnMut(&LatticePoint) -> S,
        mut layer1: impl FnMut(&LatticePoint) -> S,
    ) -> Self {
        let pts = box_points(params.dim(), radius);
        let prev = pts.iter().map(|p| (p.clone(), layer0(p))).collect();
        let curr = pts.iter().map(|p| (p.clone(), layer1(p))).collect();
        Self {
            params,
            radius,
            prev: Layer {
                t: 0,
                half_width: radius,
                values: prev,
            },
            curr: Layer {
                t: 1,
                half_width: radius,
                values: curr,
            },
        }
    }

    pub fn params(&self) -> &TodaParams {
        &self.params
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn t(&self) -> u32 {
        self.curr.t
    }

    pub fn current(&self) -> &Layer<S> {
        &self.curr
    }

    pub fn previous(&self) -> &Layer<S> {
        &self.prev
    }

    /// Right-hand side of the recurrence at `n` from the current layer,
    /// multiplying one factor at a time. With a budget, a multiplication
    /// that would form more term products than allowed is refused and its
    /// size returned instead.
    fn rhs(&self, n: &LatticePoint, budget: Option<usize>) -> Result<S, usize> {
        let [g1, g2] = self.params.groups();
        let times = |acc: S, f: &S| -> Result<S, usize> {
            let cost = acc.term_count().saturating_mul(f.term_count());
            match budget {
                Some(b) if cost > b => Err(cost),
                _ => Ok(acc.mul(f)),
            }
        };
        let prod = |g: std::ops::Range<usize>| -> Result<S, usize> {
            let mut acc = S::one();
            for i in g {
                let fwd = &self.curr.values[&n.shifted(i, 1)];
                let bwd = &self.curr.values[&n.shifted(i, -1)];
                for _ in 0..self.params.k()[i] {
                    acc = times(acc, fwd)?;
                }
                for _ in 0..self.params.l()[i] {
                    acc = times(acc, bwd)?;
                }
            }
            Ok(acc)
        };
        Ok(prod(g1)?.add(&prod(g2)?))
    }

    /// Advances one time step, producing a new state.
    pub fn step(&self) -> Result<Self, StepError> {
        self.step_with(StepOptions::default())
    }

    pub fn step_with(&self, opts: StepOptions) -> Result<Self, StepError> {
        let t_next = self.t() + 1;
        let w = valid_half_width(self.radius, t_next);
        if w < 0 {
            return Err(StepError::WindowExhausted { t: t_next });
        }
        let mut pts = box_points(self.params.dim(), w);
        if let Some(target) = opts.center_target {
            let reach = target as i64 - t_next as i64;
            pts.retain(|p| p.0.iter().map(|c| c.abs()).sum::<i64>() <= reach);
        }
        let layer_terms = AtomicUsize::new(0);
        let over_budget = |n: &LatticePoint, estimate| StepError::BudgetExceeded {
            t: t_next,
            point: n.clone(),
            estimate,
            budget: opts.term_budget.unwrap_or(0),
        };
        let values: Result<BTreeMap<_, _>, StepError> = pts
            .into_par_iter()
            .map(|n| {
                let rhs = self.rhs(&n, opts.term_budget).map_err(|e| over_budget(&n, e))?;
                match rhs.try_div(&self.prev.values[&n]) {
                    Ok(v) => {
                        let total = layer_terms.fetch_add(v.term_count(), Ordering::Relaxed) + v.term_count();
                        match opts.term_budget {
                            Some(b) if total > b => Err(over_budget(&n, total)),
                            _ => Ok((n, v)),
                        }
                    }
                    Err(DivFailure::NotDivisible) => Err(StepError::LaurentViolation { t: t_next, point: n }),
                    Err(DivFailure::ByZero) => Err(StepError::SingularValue { t: t_next, point: n }),
                }
            })
            .collect();
        Ok(Self {
            params: self.params.clone(),
            radius: self.radius,
            prev: self.curr.clone(),
            curr: Layer {
                t: t_next,
                half_width: w,
                values: values?,
            },
        })
    }

    /// Steps until `t_max`, keeping every layer.
    ///
    /// Window exhaustion and division failures end the run early and are
    /// recorded in [`Evolution::halted`] rather than returned as errors.
    pub fn evolve(self, t_max: u32) -> Evolution<S> {
        self.evolve_with(t_max, StepOptions::default())
    }

    pub fn evolve_with(self, t_max: u32, opts: StepOptions) -> Evolution<S> {
        let mut layers = vec![self.prev.clone(), self.curr.clone()];
        let mut steps = Vec::new();
        let mut state = self;
        let mut halted = None;
        while state.t() < t_max {
            match state.step_with(opts) {
                Ok(next) => {
                    steps.push(StepReport::of_layer(&next.curr));
                    layers.push(next.curr.clone());
                    state = next;
                }
                Err(e) => {
                    halted = Some(e);
                    break;
                }
            }
        }
        Evolution {
            state,
            layers,
            steps,
            halted,
        }
    }
}

/// Per-step summary.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub t: u32,
    /// Half-width of the valid region `[-w, w]^d`.
    pub region: i64,
    pub divisions_ok: usize,
    /// Per-point stats in lattice-scan order (symbolic mode only).
    pub degree_stats: Vec<PointStats>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointStats {
    pub point: LatticePoint,
    pub stats: DegreeStats,
}

impl StepReport {
    fn of_layer<S: LatticeValue>(layer: &Layer<S>) -> Self {
        let degree_stats = layer
            .values
            .iter()
            .filter_map(|(p, v)| {
                v.degree_stats().map(|stats| PointStats {
                    point: p.clone(),
                    stats,
                })
            })
            .collect();
        StepReport {
            t: layer.t,
            region: layer.half_width,
            divisions_ok: layer.values.len(),
            degree_stats,
        }
    }
}

/// Result of [`LatticeState::evolve`].
#[derive(Clone, Debug)]
pub struct Evolution<S> {
    pub state: LatticeState<S>,
    /// Every layer from `t = 0` to the last one reached.
    pub layers: Vec<Layer<S>>,
    pub steps: Vec<StepReport>,
    pub halted: Option<StepError>,
}

impl<S> Evolution<S> {
    pub fn reached_t(&self) -> u32 {
        self.layers.last().map(|l| l.t).unwrap_or(0)
    }

    /// Whether the run stopped on a Laurent violation or a zero divisor.
    pub fn violated(&self) -> bool {
        self.halted.as_ref().is_some_and(StepError::is_violation)
    }

    /// Number of divisions performed, all of which succeeded.
    pub fn divisions_ok(&self) -> usize {
        self.steps.iter().map(|s| s.divisions_ok).sum()
    }

    pub fn layer(&self, t: u32) -> Option<&Layer<S>> {
        self.layers.iter().find(|l| l.t == t)
    }
}

/// Fresh variables `x_n = tau[0;n]`, `y_n = tau[1;n]` on `[-R,R]^d`,
/// registered layer 0 first, each layer in lattice-scan order.
pub fn init_symbolic(params: &TodaParams, radius: i64, table: &mut VarTable) -> LatticeState<LaurentPoly> {
    let pts = box_points(params.dim(), radius);
    for t in 0..2 {
        for p in &pts {
            table.tau(t, &p.0);
        }
    }
    let lookup = |t: i64, p: &LatticePoint| {
        let id = table.lookup(&crate::laurent::VarName::tau(t, &p.0)).expect("registered above");
        LaurentPoly::var(id)
    };
    LatticeState::from_fn(params.clone(), radius, |p| lookup(0, p), |p| lookup(1, p))
}

/// Numeric state from explicit layer data, which must cover the window and be nonzero.
pub fn init_numeric<S: Scalar>(
    params: &TodaParams,
    radius: i64,
    values0: &BTreeMap<LatticePoint, S>,
    values1: &BTreeMap<LatticePoint, S>,
) -> Result<LatticeState<S>, InitError> {
    for p in box_points(params.dim(), radius) {
        for (layer, data) in [(0u32, values0), (1, values1)] {
            match data.get(&p) {
                None => return Err(InitError::MissingPoint { layer, point: p }),
                Some(v) if v.is_zero() => return Err(InitError::ZeroValue { layer, point: p }),
                Some(_) => {}
            }
        }
    }
    Ok(LatticeState::from_fn(
        params.clone(),
        radius,
        |p| values0[p].clone(),
        |p| values1[p].clone(),
    ))
}

/// Both initial layers identically one.
pub fn init_all_ones<S: Scalar>(params: &TodaParams, radius: i64) -> LatticeState<S> {
    LatticeState::from_fn(params.clone(), radius, |_| S::one(), |_| S::one())
}

/// Positive random rationals `p/q` with `1 <= p, q <= 9`, drawn in lattice-scan
/// order (layer 0 first) from a seeded generator.
pub fn random_rational_layers(
    params: &TodaParams,
    radius: i64,
    seed: u64,
) -> [BTreeMap<LatticePoint, Rational>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = box_points(params.dim(), radius);
    let mut draw = || {
        pts.iter()
            .map(|p| {
                let n: i64 = rng.gen_range(1..=9);
                let d: i64 = rng.gen_range(1..=9);
                (p.clone(), Rational::new(n.into(), d.into()))
            })
            .collect::<BTreeMap<_, _>>()
    };
    let l0 = draw();
    let l1 = draw();
    [l0, l1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_points_are_lexicographic() {
        let pts = box_points(2, 1);
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], LatticePoint(vec![-1, -1]));
        assert_eq!(pts[1], LatticePoint(vec![-1, 0]));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(box_points(3, -1).is_empty());
        assert_eq!(box_points(3, 0), vec![LatticePoint::origin(3)]);
    }

    #[test]
    fn symbolic_init_registers_variables() {
        let mut table = VarTable::new();
        let s = init_symbolic(&TodaParams::unit(1, 1).unwrap(), 1, &mut table);
        assert_eq!(table.len(), 18);
        assert_eq!(s.t(), 1);
        let mut table = VarTable::new();
        init_symbolic(&TodaParams::unit(2, 1).unwrap(), 1, &mut table);
        assert_eq!(table.len(), 54);
        assert_eq!(table.name(crate::VarId(0)).unwrap().to_string(), "tau[0;-1,-1,-1]");
    }

    #[test]
    fn budget_stops_before_large_products() {
        let p = TodaParams::unit(1, 1).unwrap();
        let run = |budget| {
            let opts = StepOptions {
                term_budget: Some(budget),
                center_target: None,
            };
            init_symbolic(&p, 4, &mut VarTable::new()).evolve_with(5, opts)
        };
        // Values have at most 8 terms at t=3 and 64 at t=4, so t=4 needs
        // products of at most 64 terms and t=5 products of up to 4096.
        let ev = run(1000);
        assert_eq!(ev.reached_t(), 4);
        assert!(matches!(ev.halted, Some(StepError::BudgetExceeded { t: 5, .. })));
        assert!(!ev.violated());

        // 25 values at t=3 hold more than 100 terms together.
        let ev = run(100);
        assert_eq!(ev.reached_t(), 2);
        assert!(matches!(ev.halted, Some(StepError::BudgetExceeded { t: 3, .. })));
    }

    #[test]
    fn center_focus_matches_full_window() {
        let p = TodaParams::new(1, 1, vec![2, 1], vec![1, 1]).unwrap();
        let mut table = VarTable::new();
        let full = init_symbolic(&p, 3, &mut table).evolve(4);
        let focus = StepOptions {
            term_budget: None,
            center_target: Some(4),
        };
        let mut table = VarTable::new();
        let narrow = init_symbolic(&p, 3, &mut table).evolve_with(4, focus);
        let o = LatticePoint::origin(2);
        assert_eq!(narrow.layer(3).unwrap().values.len(), 5);
        assert_eq!(full.layer(4).unwrap().get(&o), narrow.layer(4).unwrap().get(&o));
    }

    #[test]
    fn zero_radius_exhausts_immediately() {
        let mut table = VarTable::new();
        let s = init_symbolic(&TodaParams::unit(1, 1).unwrap(), 0, &mut table);
        assert_eq!(s.step().unwrap_err(), StepError::WindowExhausted { t: 2 });
    }

    #[test]
    fn numeric_init_validation() {
        let p = TodaParams::unit(1, 1).unwrap();
        let [l0, mut l1] = random_rational_layers(&p, 1, 3);
        assert!(init_numeric(&p, 1, &l0, &l1).is_ok());
        l1.insert(LatticePoint(vec![0, 0]), Rational::from_integer(0.into()));
        assert!(matches!(init_numeric(&p, 1, &l0, &l1), Err(InitError::ZeroValue { layer: 1, .. })));
        l1.remove(&LatticePoint(vec![0, 0]));
        assert!(matches!(init_numeric(&p, 1, &l0, &l1), Err(InitError::MissingPoint { layer: 1, .. })));
    }

    #[test]
    fn light_cone_stops() {
        let p = TodaParams::unit(1, 1).unwrap();
        let ev = init_all_ones::<Rational>(&p, 4).evolve(5);
        assert!(ev.halted.is_none());
        assert_eq!(ev.reached_t(), 5);
        assert_eq!(ev.layer(5).unwrap().values.len(), 1);
        let ev = init_all_ones::<Rational>(&p, 2).evolve(5);
        assert_eq!(ev.reached_t(), 3);
        assert_eq!(ev.halted, Some(StepError::WindowExhausted { t: 4 }));
    }
}
