use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{Layer, LatticePoint};
use crate::laurent::{gcd_of_parts, polynomial_part, LaurentPoly, VarId};

/// Default cap on the combined term count of a pair before it is skipped.
pub const DEFAULT_PAIR_TERM_BUDGET: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairVerdict {
    Unit,
    NonunitGcd,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Iterate {
    pub t: u32,
    pub point: LatticePoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairResult {
    pub first: Iterate,
    pub second: Iterate,
    pub verdict: PairVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoprimenessReport {
    pub term_budget: usize,
    pub iterates: usize,
    pub pairs: usize,
    pub units: usize,
    pub nonunits: usize,
    pub skipped: usize,
    pub skipped_fraction: f64,
    /// Every non-unit and skipped pair; unit pairs are only counted.
    pub exceptions: Vec<PairResult>,
}

impl CoprimenessReport {
    pub fn all_units(&self) -> bool {
        self.nonunits == 0
    }
}

struct Prepared<'a> {
    t: u32,
    point: &'a LatticePoint,
    part: LaurentPoly,
    vars: BTreeSet<VarId>,
    terms: usize,
}

/// Pairwise gcd of every computed iterate with `t >= 2`.
///
/// Layers 0 and 1 hold single variables, which are units in the Laurent
/// ring, so they are not compared. A pair whose combined term count exceeds
/// `term_budget` is marked [`PairVerdict::Skipped`].
pub fn coprimeness_matrix(layers: &[Layer<LaurentPoly>], term_budget: usize) -> CoprimenessReport {
    let prepared: Vec<Prepared> = layers
        .iter()
        .filter(|l| l.t >= 2)
        .flat_map(|l| l.values.iter().map(move |(p, v)| (l.t, p, v)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(t, point, v)| Prepared {
            t,
            point,
            part: polynomial_part(v),
            vars: v.vars(),
            terms: v.len(),
        })
        .collect();
    let n = prepared.len();
    let index_pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let verdicts: Vec<PairVerdict> = index_pairs
        .par_iter()
        .map(|&(i, j)| pair_verdict(&prepared[i], &prepared[j], term_budget))
        .collect();

    let mut report = CoprimenessReport {
        term_budget,
        iterates: n,
        pairs: index_pairs.len(),
        units: 0,
        nonunits: 0,
        skipped: 0,
        skipped_fraction: 0.0,
        exceptions: Vec::new(),
    };
    for (&(i, j), verdict) in index_pairs.iter().zip(verdicts) {
        match verdict {
            PairVerdict::Unit => report.units += 1,
            PairVerdict::NonunitGcd => report.nonunits += 1,
            PairVerdict::Skipped => report.skipped += 1,
        }
        if verdict != PairVerdict::Unit {
            let it = |p: &Prepared| Iterate {
                t: p.t,
                point: p.point.clone(),
            };
            report.exceptions.push(PairResult {
                first: it(&prepared[i]),
                second: it(&prepared[j]),
                verdict,
            });
        }
    }
    if report.pairs > 0 {
        report.skipped_fraction = report.skipped as f64 / report.pairs as f64;
    }
    report
}

fn pair_verdict(a: &Prepared, b: &Prepared, budget: usize) -> PairVerdict {
    if a.terms + b.terms > budget {
        return PairVerdict::Skipped;
    }
    if a.vars.is_disjoint(&b.vars) {
        // Any common factor would involve only shared variables, so only
        // the integer contents can meet.
        let g = num_integer::Integer::gcd(&a.part.integer_content(), &b.part.integer_content());
        return if num_traits::One::is_one(&g) {
            PairVerdict::Unit
        } else {
            PairVerdict::NonunitGcd
        };
    }
    if gcd_of_parts(&a.part, &b.part).is_one() {
        PairVerdict::Unit
    } else {
        PairVerdict::NonunitGcd
    }
}

/// gcd of a single pair, for the self-pair and ad-hoc checks.
pub fn pair_gcd(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    gcd_of_parts(&polynomial_part(p), &polynomial_part(q))
}
