//! Helpers shared by the integration, property and acceptance targets.
#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use toda_lp::laurent::{canonical, exact_div, gcd, parse, serialize};
use toda_lp::toda::TodaParams;
use toda_lp::{LaurentPoly, Monomial, Rational, VarId, VarTable};

pub const PROPERTY_CASES: u32 = 10_000;

/// Per-axis `(k_i, l_i)` patterns up to the reflection `n_i -> -n_i`.
const AXIS_TYPES: [(u32, u32); 3] = [(1, 1), (1, 2), (2, 2)];

fn group_patterns(size: usize) -> Vec<Vec<usize>> {
    match size {
        1 => (0..3).map(|a| vec![a]).collect(),
        2 => (0..3).flat_map(|a| (a..3).map(move |b| vec![a, b])).collect(),
        _ => unreachable!("groups of size 1 or 2 only"),
    }
}

/// The parameter sweep: `(a,b)` in `{(1,1),(2,1),(2,2)}` with every `{1,2}`
/// pattern up to permuting axes within a group, reflecting an axis and
/// swapping equal-sized groups, plus `(1,1)` with `k = l = (3,3)`.
pub fn sweep_cases() -> Vec<TodaParams> {
    let mut out = Vec::new();
    for (a, b) in [(1usize, 1usize), (2, 1), (2, 2)] {
        let (ga, gb) = (group_patterns(a), group_patterns(b));
        for (i, x) in ga.iter().enumerate() {
            for (j, y) in gb.iter().enumerate() {
                if a == b && j < i {
                    continue;
                }
                let axes: Vec<(u32, u32)> = x.iter().chain(y).map(|&t| AXIS_TYPES[t]).collect();
                let k = axes.iter().map(|e| e.0).collect();
                let l = axes.iter().map(|e| e.1).collect();
                out.push(TodaParams::new(a, b, k, l).unwrap());
            }
        }
    }
    out.push(TodaParams::new(1, 1, vec![3, 3], vec![3, 3]).unwrap());
    out
}

pub fn describe(p: &TodaParams) -> String {
    format!("(a,b)=({},{}) k={:?} l={:?}", p.a(), p.b(), p.k(), p.l())
}

/// Every `k, l` in `{1,2}^(a+b)`, without symmetry reduction.
pub fn all_small_patterns(a: usize, b: usize) -> Vec<TodaParams> {
    let d = a + b;
    let mut out = Vec::new();
    for mask in 0..(1u32 << (2 * d)) {
        let bit = |i: usize| 1 + ((mask >> i) & 1);
        let k = (0..d).map(bit).collect();
        let l = (0..d).map(|i| bit(d + i)).collect();
        out.push(TodaParams::new(a, b, k, l).unwrap());
    }
    out
}

// ---- random Laurent polynomials ----

pub const NVARS: u32 = 4;

pub fn property_table() -> VarTable {
    let mut t = VarTable::new();
    for name in ["a", "b", "c", "d"] {
        t.symbol(name);
    }
    t
}

fn monomial_strategy(min_exp: i32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0..NVARS, min_exp..=3i32), 0..4)
        .prop_map(|pairs| Monomial::from_pairs(pairs.into_iter().map(|(v, e)| (VarId(v), e))))
}

/// Up to five terms, exponents in `[-3, 3]`, coefficients in `[-6, 6]`.
pub fn laurent_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial_strategy(-3), -6i64..=6), 0..6)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

pub fn nonzero_laurent_strategy() -> impl Strategy<Value = LaurentPoly> {
    laurent_strategy().prop_filter("nonzero", |p| !p.is_zero())
}

/// Small polynomials, so products stay cheap for the gcd properties.
pub fn small_poly_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((monomial_strategy(0), -4i64..=4), 1..4)
        .prop_map(|terms| LaurentPoly::from_terms(terms.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn unit_strategy() -> impl Strategy<Value = LaurentPoly> {
    (monomial_strategy(-3), any::<bool>()).prop_map(|(m, neg)| LaurentPoly::term(m, if neg { -1 } else { 1 }))
}

/// A point with nonzero rational coordinates for every variable.
pub fn point_strategy() -> impl Strategy<Value = HashMap<VarId, Rational>> {
    let coord = (prop_oneof![-7i64..=-1, 1i64..=7], 1i64..=5)
        .prop_map(|(n, d)| Rational::new(n.into(), d.into()));
    prop::collection::vec(coord, NVARS as usize)
        .prop_map(|v| v.into_iter().enumerate().map(|(i, x)| (VarId(i as u32), x)).collect())
}

// ---- properties, shared by the proptest suite and the acceptance run ----

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what()))
    }
}

pub fn ring_axioms((p, q, r): (LaurentPoly, LaurentPoly, LaurentPoly)) -> Result<(), TestCaseError> {
    ensure(&p + &q == &q + &p, || format!("a+b != b+a for {p}, {q}"))?;
    ensure(&p * &q == &q * &p, || format!("ab != ba for {p}, {q}"))?;
    ensure(&(&p + &q) + &r == &p + &(&q + &r), || "addition not associative".into())?;
    ensure(&(&p * &q) * &r == &p * &(&q * &r), || "multiplication not associative".into())?;
    ensure(&p * &(&q + &r) == &(&p * &q) + &(&p * &r), || "not distributive".into())?;
    ensure(&p + &LaurentPoly::zero() == p, || "zero is not neutral".into())?;
    ensure(&p * &LaurentPoly::one() == p, || "one is not neutral".into())?;
    let same = p.clone();
    ensure((&p - &same).is_zero(), || "p - p != 0".into())?;
    ensure(&p + &(-&p) == LaurentPoly::zero(), || "negation".into())
}

/// Evaluation at a point is a ring homomorphism (an oracle independent of
/// the sparse multiplication code).
pub fn evaluation_homomorphism(
    (p, q, x): (LaurentPoly, LaurentPoly, HashMap<VarId, Rational>),
) -> Result<(), TestCaseError> {
    let ev = |f: &LaurentPoly| toda_lp::laurent::eval_at(f, &x).unwrap();
    ensure(ev(&(&p * &q)) == ev(&p) * ev(&q), || format!("eval(pq) for {p}, {q}"))?;
    ensure(ev(&(&p + &q)) == ev(&p) + ev(&q), || format!("eval(p+q) for {p}, {q}"))
}

pub fn div_mul_inverse((p, q): (LaurentPoly, LaurentPoly)) -> Result<(), TestCaseError> {
    let pq = &p * &q;
    let back = exact_div(&pq, &q).map_err(|e| TestCaseError::fail(format!("{pq} / {q}: {e}")))?;
    ensure(back == p, || format!("({pq}) / ({q}) = {back}, expected {p}"))?;
    if let Ok(r) = exact_div(&p, &q) {
        ensure(&r * &q == p, || format!("claimed quotient {r} of {p} by {q} is wrong"))?;
    }
    Ok(())
}

pub fn gcd_properties((f, g, h, u): (LaurentPoly, LaurentPoly, LaurentPoly, LaurentPoly)) -> Result<(), TestCaseError> {
    let (fg, fh) = (&f * &g, &f * &h);
    let d = gcd(&fg, &fh).unwrap();
    ensure(d == gcd(&fh, &fg).unwrap(), || format!("gcd not symmetric for {fg}, {fh}"))?;
    ensure(exact_div(&fg, &d).is_ok() && exact_div(&fh, &d).is_ok(), || {
        format!("gcd {d} does not divide {fg} and {fh}")
    })?;
    ensure(exact_div(&d, &canonical(&f)).is_ok(), || format!("gcd {d} misses the common factor {f}"))?;
    // Unit-correctness: units never change a gcd, and a unit argument gives 1.
    ensure(gcd(&(&fg * &u), &fh).unwrap() == d, || format!("unit {u} changed gcd({fg}, {fh})"))?;
    ensure(gcd(&fg, &u).unwrap().is_one(), || format!("gcd({fg}, {u}) is not 1"))?;
    ensure(gcd(&d, &d).unwrap() == d, || "gcd(d, d) != d".into())
}

pub fn text_round_trip(p: LaurentPoly) -> Result<(), TestCaseError> {
    let mut table = property_table();
    let text = serialize(&p, &table);
    let back = parse(&text, &mut table).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    ensure(back == p, || format!("round trip of {text} gave {back}"))?;
    ensure(serialize(&back, &table) == text, || format!("serialization of {text} is not stable"))
}
