use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::mutation::{compose_polynomial, mutate_sequence, MutationError, MutationLog, DEFAULT_HAT_BOUND};
use super::seed::{Seed, SeedEntry};
use crate::laurent::{exact_div, serialize, LaurentPoly, Monomial, VarId, VarTable};
use crate::toda::{box_points, init_symbolic, LatticePoint, TodaParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TodaSeedError {
    #[error("window radius {0} is too small; at least 2 is needed")]
    RadiusTooSmall(i64),
    #[error("center {center} is too close to the boundary of a radius-{radius} window")]
    CenterTooClose { center: LatticePoint, radius: i64 },
    #[error("{0}")]
    Mutation(#[from] MutationError),
    #[error("lattice step failed: {0}")]
    Step(#[from] crate::toda::StepError),
}

/// `X_{t,n} = prod_{i<=a} tau_{n+e_i}^{k_i} tau_{n-e_i}^{l_i} + prod_{i>a} (...)`
/// with `tau` given by `var`.
pub fn exchange_polynomial(params: &TodaParams, n: &LatticePoint, var: impl Fn(&LatticePoint) -> VarId) -> LaurentPoly {
    let [g1, g2] = params.groups();
    let prod = |g: std::ops::Range<usize>| {
        let pairs: Vec<(VarId, i32)> = g
            .flat_map(|i| {
                [
                    (var(&n.shifted(i, 1)), params.k()[i] as i32),
                    (var(&n.shifted(i, -1)), params.l()[i] as i32),
                ]
            })
            .collect();
        LaurentPoly::term(Monomial::from_pairs(pairs), 1)
    };
    &prod(g1) + &prod(g2)
}

/// The lattice seed on a finite window: entries `(x_n, X_{1,n})` and
/// `(y_n, X_{0,n})` for interior points, with `x_n = tau[0;n]`,
/// `y_n = tau[1;n]`; the boundary variables of both layers are frozen.
#[derive(Clone, Debug)]
pub struct TodaSeed {
    pub params: TodaParams,
    pub radius: i64,
    pub seed: Seed,
    pub interior: Vec<LatticePoint>,
}

impl TodaSeed {
    pub fn x(&self, table: &mut VarTable, n: &LatticePoint) -> VarId {
        table.tau(0, &n.0)
    }

    pub fn y(&self, table: &mut VarTable, n: &LatticePoint) -> VarId {
        table.tau(1, &n.0)
    }
}

pub fn build_toda_seed(params: &TodaParams, radius: i64, table: &mut VarTable) -> Result<TodaSeed, TodaSeedError> {
    if radius < 2 {
        return Err(TodaSeedError::RadiusTooSmall(radius));
    }
    let d = params.dim();
    let all = box_points(d, radius);
    for t in 0..2 {
        for p in &all {
            table.tau(t, &p.0);
        }
    }
    let interior: Vec<LatticePoint> = all.iter().filter(|p| p.max_norm() < radius).cloned().collect();
    let frozen: BTreeSet<VarId> = all
        .iter()
        .filter(|p| p.max_norm() == radius)
        .flat_map(|p| [table.tau(0, &p.0), table.tau(1, &p.0)])
        .collect();
    let mut entries = Vec::with_capacity(2 * interior.len());
    for (layer, other) in [(0, 1), (1, 0)] {
        for n in &interior {
            let var = table.tau(layer, &n.0);
            let exchange = exchange_polynomial(params, n, |p| table.lookup(&crate::VarName::tau(other, &p.0)).unwrap());
            entries.push(SeedEntry::new(var, exchange));
        }
    }
    let seed = Seed::new(entries, frozen).expect("lattice seed is valid by construction");
    Ok(TodaSeed {
        params: params.clone(),
        radius,
        seed,
        interior,
    })
}

/// `N(m + e_i) = k_i`, `N(m - e_i) = l_i`.
fn stencil_weights(params: &TodaParams, m: &LatticePoint) -> (BTreeMap<LatticePoint, u32>, BTreeMap<LatticePoint, u32>) {
    let [g1, g2] = params.groups();
    let side = |g: std::ops::Range<usize>| {
        g.flat_map(|i| [(m.shifted(i, 1), params.k()[i]), (m.shifted(i, -1), params.l()[i])])
            .collect::<BTreeMap<_, _>>()
    };
    (side(g1), side(g2))
}

/// Closed form of the exchange polynomial at `y_m` after mutating at the
/// `x_n`, `n` in `k`:
///
/// ```text
/// C_K prod_{B} z^N prod_{U\A} x^N + D_K prod_{A} z^N prod_{V\B} x^N
/// C_K = prod_{n in A, n' in V\B} y_{n+n'-m}^{N(n)N(n')}
/// D_K = prod_{n in U\A, n' in B} y_{n+n'-m}^{N(n)N(n')}
/// ```
///
/// where `U`, `V` are the two halves of the stencil of `m`, `A = U ∩ K` and
/// `B = V ∩ K`. Points of `k` outside the stencil are ignored.
pub fn lemma_formula(params: &TodaParams, m: &LatticePoint, k: &BTreeSet<LatticePoint>, table: &mut VarTable) -> LaurentPoly {
    let (u, v) = stencil_weights(params, m);
    let (a, a_bar): (Vec<_>, Vec<_>) = u.iter().partition(|(n, _)| k.contains(*n));
    let (b, b_bar): (Vec<_>, Vec<_>) = v.iter().partition(|(n, _)| k.contains(*n));
    let pairs = |factor: &[(&LatticePoint, &u32)], layer: i64, extra: &mut Vec<(VarId, i32)>, table: &mut VarTable| {
        for (n, &w) in factor {
            extra.push((table.tau(layer, &n.0), w as i32));
        }
    };
    let cross = |p: &[(&LatticePoint, &u32)], q: &[(&LatticePoint, &u32)], table: &mut VarTable| {
        let mut out = Vec::new();
        for (n, &wn) in p {
            for (n2, &wn2) in q {
                let pt = LatticePoint(n.0.iter().zip(&n2.0).zip(&m.0).map(|((x, y), c)| x + y - c).collect());
                out.push((table.tau(1, &pt.0), (wn * wn2) as i32));
            }
        }
        out
    };
    let mut first = cross(&a, &b_bar, table);
    let mut second = cross(&a_bar, &b, table);
    pairs(&b, 2, &mut first, table);
    pairs(&a_bar, 0, &mut first, table);
    pairs(&a, 2, &mut second, table);
    pairs(&b_bar, 0, &mut second, table);
    &LaurentPoly::term(Monomial::from_pairs(first), 1) + &LaurentPoly::term(Monomial::from_pairs(second), 1)
}

/// Engine side of the closed-form check: mutates at `x_n` for the points of
/// `order`, in order, and returns the exchange polynomial at `y_m`.
pub fn mutate_lattice_points(
    toda: &TodaSeed,
    m: &LatticePoint,
    order: &[LatticePoint],
    table: &mut VarTable,
) -> Result<(LaurentPoly, Seed, MutationLog), TodaSeedError> {
    let vars: Vec<VarId> = order.iter().map(|n| table.tau(0, &n.0)).collect();
    let (seed, log) = mutate_sequence(&toda.seed, &vars, table, DEFAULT_HAT_BOUND)?;
    let y = table.tau(1, &m.0);
    let f = seed.exchange_of(y).cloned().expect("y_m is a cluster variable");
    Ok((f, seed, log))
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub center: LatticePoint,
    pub order: Vec<LatticePoint>,
    pub engine: String,
    pub formula: String,
    pub equal: bool,
}

pub fn lemma_check(
    params: &TodaParams,
    radius: i64,
    m: &LatticePoint,
    order: &[LatticePoint],
    table: &mut VarTable,
) -> Result<LemmaReport, TodaSeedError> {
    let toda = build_toda_seed(params, radius, table)?;
    check_center(m, radius, 1)?;
    let (engine, _, _) = mutate_lattice_points(&toda, m, order, table)?;
    let k: BTreeSet<LatticePoint> = order.iter().cloned().collect();
    let formula = lemma_formula(params, m, &k, table);
    Ok(LemmaReport {
        center: m.clone(),
        order: order.to_vec(),
        equal: engine == formula,
        engine: serialize(&engine, table),
        formula: serialize(&formula, table),
    })
}

fn check_center(m: &LatticePoint, radius: i64, margin: i64) -> Result<(), TodaSeedError> {
    if m.max_norm() + margin > radius - 1 {
        return Err(TodaSeedError::CenterTooClose {
            center: m.clone(),
            radius,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct MuInfinityReport {
    pub center: LatticePoint,
    pub radius: i64,
    /// `None` means lattice-scan order.
    pub mutation_order_seed: Option<u64>,
    pub mutations: usize,
    /// Every new variable `z_n = hat_n / x_n` equals the lattice step value.
    pub new_variables_match_step: bool,
    /// The exchange polynomial at `y_m` equals `X_{2,m}` in the `z` variables.
    pub formal_match: bool,
    /// Both sides agree after substituting the step-computed `z_n`.
    pub substituted_match: bool,
    pub passed: bool,
    pub exchange: String,
    pub expected: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch_detail: Option<String>,
}

/// Mutates at every interior `x_n` (shuffled by `order_seed`, or in scan
/// order) and compares the exchange polynomial paired with `y_m` against
/// `X_{2,m}` built from `z_n = tau[2;n]`, both formally and with the `z_n`
/// replaced by the values of one lattice step.
pub fn mu_infinity_check(
    params: &TodaParams,
    radius: i64,
    m: &LatticePoint,
    order_seed: Option<u64>,
    table: &mut VarTable,
) -> Result<MuInfinityReport, TodaSeedError> {
    let toda = build_toda_seed(params, radius, table)?;
    check_center(m, radius, 1)?;
    let mut order = toda.interior.clone();
    if let Some(s) = order_seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    let (engine, _, log) = mutate_lattice_points(&toda, m, &order, table)?;

    let z_var = |n: &LatticePoint, table: &mut VarTable| table.tau(2, &n.0);
    let z_ids: BTreeMap<LatticePoint, VarId> = toda.interior.iter().map(|n| (n.clone(), z_var(n, table))).collect();
    let expected = exchange_polynomial(params, m, |n| z_ids[n]);

    let stepped = init_symbolic(params, radius, table).step()?;
    let z_values: BTreeMap<VarId, LaurentPoly> = stepped
        .current()
        .values
        .iter()
        .map(|(n, v)| (z_ids[n], v.clone()))
        .collect();

    let mut mismatches = Vec::new();
    let mut new_variables_match_step = true;
    for r in &log.records {
        let x = LaurentPoly::var(r.mutated);
        let z = exact_div(&r.hat.hat, &x).expect("division by a variable");
        if z_values.get(&r.new_var) != Some(&z) {
            new_variables_match_step = false;
            mismatches.push(format!("new variable {} differs from the lattice step", serialize(&LaurentPoly::var(r.new_var), table)));
        }
    }
    let formal_match = engine == expected;
    if !formal_match {
        mismatches.push("exchange polynomial differs from X_2 formally".into());
    }
    let substituted_match = compose_polynomial(&engine, &z_values).map_err(MutationError::from)?
        == compose_polynomial(&expected, &z_values).map_err(MutationError::from)?;
    if !substituted_match {
        mismatches.push("exchange polynomial differs from X_2 after substituting step values".into());
    }
    Ok(MuInfinityReport {
        center: m.clone(),
        radius,
        mutation_order_seed: order_seed,
        mutations: log.records.len(),
        new_variables_match_step,
        formal_match,
        substituted_match,
        passed: mismatches.is_empty(),
        exchange: serialize(&engine, table),
        expected: serialize(&expected, table),
        mismatch_detail: (!mismatches.is_empty()).then(|| mismatches.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;

    #[test]
    fn seed_shape_for_two_dimensions() {
        let mut table = VarTable::new();
        let p = TodaParams::unit(1, 1).unwrap();
        let ts = build_toda_seed(&p, 2, &mut table).unwrap();
        assert_eq!(ts.seed.len(), 18);
        assert_eq!(ts.seed.frozen().len(), 32);
        let x0 = table.tau(0, &[0, 0]);
        let f = ts.seed.exchange_of(x0).unwrap();
        let expected = parse("tau[1;1,0]*tau[1;-1,0] + tau[1;0,1]*tau[1;0,-1]", &mut table).unwrap();
        assert_eq!(f, &expected);
        assert!(matches!(build_toda_seed(&p, 1, &mut table), Err(TodaSeedError::RadiusTooSmall(1))));
    }

    #[test]
    fn hat_of_x_is_its_exchange_polynomial() {
        let mut table = VarTable::new();
        let p = TodaParams::new(1, 1, vec![2, 1], vec![1, 2]).unwrap();
        let ts = build_toda_seed(&p, 2, &mut table).unwrap();
        for i in 0..ts.interior.len() {
            let h = super::super::compute_hat(&ts.seed, i, 64).unwrap();
            assert!(h.denominators.is_empty());
            assert_eq!(h.hat, ts.seed.entry(i).exchange);
        }
    }

    #[test]
    fn single_mutation_matches_the_worked_display() {
        // a = b = 1: mutate at x_{m+e1}; X_{0,m} becomes
        // (y_{m+e1+e2}^{k2} y_{m+e1-e2}^{l2})^{k1} x_{m-e1}^{l1} + z_{m+e1}^{k1} x_{m+e2}^{k2} x_{m-e2}^{l2}
        let mut table = VarTable::new();
        let p = TodaParams::new(1, 1, vec![2, 1], vec![1, 3]).unwrap();
        let ts = build_toda_seed(&p, 3, &mut table).unwrap();
        let m = LatticePoint::origin(2);
        let (f, _, _) = mutate_lattice_points(&ts, &m, &[LatticePoint(vec![1, 0])], &mut table).unwrap();
        let expected = parse(
            "tau[1;1,1]^2*tau[1;1,-1]^6*tau[0;-1,0] + tau[2;1,0]^2*tau[0;0,1]*tau[0;0,-1]^3",
            &mut table,
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn formula_for_empty_and_mixed_sets() {
        let mut table = VarTable::new();
        let p = TodaParams::new(1, 1, vec![2, 1], vec![1, 3]).unwrap();
        let m = LatticePoint::origin(2);
        for n in box_points(2, 1) {
            table.tau(0, &n.0);
        }
        let x0 = exchange_polynomial(&p, &m, |n| table.lookup(&crate::VarName::tau(0, &n.0)).unwrap());
        assert_eq!(lemma_formula(&p, &m, &BTreeSet::new(), &mut table), x0);

        // K = {m+e1, m+e2}: the cross factors y_{m+e1-e2}^{k1 l2} and y_{m+e2-e1}^{l1 k2} appear.
        let k: BTreeSet<_> = [LatticePoint(vec![1, 0]), LatticePoint(vec![0, 1])].into();
        let f = lemma_formula(&p, &m, &k, &mut table);
        let expected = parse(
            "tau[1;1,-1]^6*tau[2;0,1]*tau[0;-1,0] + tau[1;-1,1]*tau[2;1,0]^2*tau[0;0,-1]^3",
            &mut table,
        )
        .unwrap();
        assert_eq!(f, expected);
        let r = lemma_check(&p, 3, &m, &[LatticePoint(vec![0, 1]), LatticePoint(vec![1, 0])], &mut table).unwrap();
        assert!(r.equal, "{} vs {}", r.engine, r.formula);
    }

    #[test]
    fn mu_infinity_in_two_dimensions() {
        let mut table = VarTable::new();
        let p = TodaParams::unit(1, 1).unwrap();
        let m = LatticePoint::origin(2);
        let r = mu_infinity_check(&p, 3, &m, Some(7), &mut table).unwrap();
        assert!(r.passed, "{:?}", r.mismatch_detail);
        assert_eq!(r.mutations, 25);
        let again = mu_infinity_check(&p, 3, &m, None, &mut table).unwrap();
        assert_eq!(again.exchange, r.exchange);
    }

    #[test]
    fn mu_infinity_needs_room() {
        let mut table = VarTable::new();
        let p = TodaParams::unit(1, 1).unwrap();
        let r = mu_infinity_check(&p, 2, &LatticePoint(vec![1, 0]), None, &mut table);
        assert!(matches!(r, Err(TodaSeedError::CenterTooClose { .. })));
    }
}
