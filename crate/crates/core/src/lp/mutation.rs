use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::seed::{advanced_tau, Seed, SeedEntry, SeedError};
use crate::error::AlgebraError;
use crate::laurent::{
    exact_div, monomial_content, parse, remove_common_factors, serialize, substitute, LaurentPoly, Monomial,
    VarId, VarTable,
};

/// Default cap on the exponent search in [`compute_hat`].
pub const DEFAULT_HAT_BOUND: u32 = 64;

/// Placeholder variable `w` in `F_i|_{x_j <- F_j / w}`; never interned.
const SCRATCH: VarId = VarId(u32::MAX);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("no seed entry at index {0}")]
    NoSuchEntry(usize),
    #[error("`{0}` is not a cluster variable of the seed")]
    NotClusterVariable(String),
    #[error("hat undefined for {var}: F_{other} still divides after {bound} steps")]
    HatUndefined { var: VarId, other: VarId, bound: u32 },
    #[error("exchange Laurent polynomial of {var} has a negative power of {other}")]
    HatNegativePower { var: VarId, other: VarId },
    #[error("vanishing truncation: hat of {var} vanishes at {other} = 0")]
    VanishingTruncation { var: VarId, other: VarId },
    #[error("new variable name `{0}` is already used in the seed")]
    NameInUse(String),
    #[error("invariant breach after mutation: {0}")]
    InvariantBreach(SeedError),
    #[error("cluster expansion of {0} is not a Laurent polynomial")]
    NotLaurent(VarId),
    #[error("algebra error: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("step {position} of the sequence: {source}")]
    Sequence {
        position: usize,
        source: Box<MutationError>,
    },
}

/// Exchange Laurent polynomial `hat = F / prod x_j^{a_j}` of one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeLaurent {
    pub entry: usize,
    pub hat: LaurentPoly,
    /// The exponents `a_j`; variables with `a_j = 0` are omitted.
    pub denominators: BTreeMap<VarId, u32>,
}

/// For each cluster variable `x_j` in `F_i`, `a_j` is the largest `e` with
/// `F_j^e` dividing `F_i|_{x_j <- F_j / w}`.
pub fn compute_hat(seed: &Seed, i: usize, bound: u32) -> Result<ExchangeLaurent, MutationError> {
    if i >= seed.len() {
        return Err(MutationError::NoSuchEntry(i));
    }
    let entry = seed.entry(i);
    let f = &entry.exchange;
    let mut denominators = BTreeMap::new();
    let mut u = Monomial::one();
    for v in f.vars() {
        let Some(j) = seed.position(v) else { continue };
        let fj = &seed.entry(j).exchange;
        let mut cur = substitute(f, v, fj, &Monomial::var(SCRATCH))?;
        let mut a = 0u32;
        loop {
            match exact_div(&cur, fj) {
                Ok(q) => {
                    a += 1;
                    if a > bound {
                        return Err(MutationError::HatUndefined {
                            var: entry.var,
                            other: v,
                            bound,
                        });
                    }
                    cur = q;
                }
                Err(AlgebraError::NotDivisible) => break,
                Err(e) => return Err(e.into()),
            }
        }
        if a > 0 {
            denominators.insert(v, a);
            u = u.mul(&Monomial::var_pow(v, a as i32));
        }
    }
    Ok(ExchangeLaurent {
        entry: i,
        hat: f.mul_monomial(&u.inverse()),
        denominators,
    })
}

/// How one exchange polynomial changed in a mutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryUpdate {
    pub var: VarId,
    /// Common factor divided out of `G_j` (1 if none).
    pub removed_factor: LaurentPoly,
    /// Monic monomial `M` with `F_j' = M * H_j`.
    pub clearing_monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationRecord {
    pub mutated: VarId,
    pub new_var: VarId,
    pub hat: ExchangeLaurent,
    pub updates: Vec<EntryUpdate>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MutationLog {
    pub records: Vec<MutationRecord>,
}

impl MutationLog {
    /// Re-applies the log to `initial` with the recorded variable names.
    pub fn replay(&self, initial: &Seed, bound: u32) -> Result<Seed, MutationError> {
        let mut seed = initial.clone();
        for (position, r) in self.records.iter().enumerate() {
            let wrap = |e| MutationError::Sequence {
                position,
                source: Box::new(e),
            };
            let i = seed.position(r.mutated).ok_or_else(|| wrap(MutationError::NotClusterVariable(r.mutated.to_string())))?;
            seed = mutate_as(&seed, i, r.new_var, bound).map_err(wrap)?.0;
        }
        Ok(seed)
    }

    pub fn to_report(&self, table: &VarTable) -> Vec<MutationRecordReport> {
        let name = |v: VarId| table.name(v).map(|n| n.to_string()).unwrap_or_else(|| v.to_string());
        self.records
            .iter()
            .map(|r| MutationRecordReport {
                mutated: name(r.mutated),
                new_var: name(r.new_var),
                hat: serialize(&r.hat.hat, table),
                updates: r
                    .updates
                    .iter()
                    .map(|u| EntryUpdateReport {
                        var: name(u.var),
                        removed_factor: serialize(&u.removed_factor, table),
                        clearing_monomial: serialize(&LaurentPoly::term(u.clearing_monomial.clone(), 1), table),
                    })
                    .collect(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryUpdateReport {
    pub var: String,
    pub removed_factor: String,
    pub clearing_monomial: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MutationRecordReport {
    pub mutated: String,
    pub new_var: String,
    pub hat: String,
    pub updates: Vec<EntryUpdateReport>,
}

/// Mutation at entry `i`, naming the new cluster variable `new_var`.
pub fn mutate_as(seed: &Seed, i: usize, new_var: VarId, bound: u32) -> Result<(Seed, MutationRecord), MutationError> {
    let hat = compute_hat(seed, i, bound)?;
    let x = seed.entry(i).var;
    if seed.mentions(new_var) {
        return Err(MutationError::NameInUse(new_var.to_string()));
    }
    let mut entries: Vec<SeedEntry> = seed.entries().to_vec();
    let mut updates = Vec::new();
    for (j, ej) in seed.entries().iter().enumerate() {
        if j == i || !ej.exchange.contains_var(x) {
            continue;
        }
        let xj = ej.var;
        if hat.hat.degree_range(xj).is_some_and(|(lo, _)| lo < 0) {
            return Err(MutationError::HatNegativePower { var: x, other: xj });
        }
        let t = hat.hat.truncate_var(xj)?;
        if t.is_zero() {
            return Err(MutationError::VanishingTruncation { var: x, other: xj });
        }
        let g = substitute(&ej.exchange, x, &t, &Monomial::var(new_var))?;
        let h = remove_common_factors(&g, &t)?;
        let removed_factor = exact_div(&g, &h)?;
        let (m, f_new) = monomial_content(&h)?;
        entries[j].exchange = f_new;
        updates.push(EntryUpdate {
            var: xj,
            removed_factor,
            clearing_monomial: m.inverse(),
        });
    }
    entries[i] = SeedEntry {
        var: new_var,
        exchange: seed.entry(i).exchange.clone(),
        origin: Some(x),
    };
    let out = Seed::from_parts_unchecked(entries, seed.frozen().clone());
    for j in 0..out.len() {
        out.check_entry(j).map_err(MutationError::InvariantBreach)?;
    }
    Ok((
        out,
        MutationRecord {
            mutated: x,
            new_var,
            hat,
            updates,
        },
    ))
}

/// Picks the name of the variable replacing entry `i`: the variable it came
/// from if it was itself produced by a mutation (so mutating twice returns
/// the original name), `tau[t+2;n]` for a lattice variable `tau[t;n]`, and a
/// primed name otherwise.
pub fn default_new_var(seed: &Seed, i: usize, table: &mut VarTable) -> VarId {
    let e = seed.entry(i);
    if let Some(o) = e.origin {
        if !seed.mentions(o) {
            return o;
        }
    }
    let name = table.name(e.var).cloned();
    if let Some(up) = name.as_ref().and_then(advanced_tau) {
        let id = table.intern(up);
        if !seed.mentions(id) {
            return id;
        }
    }
    let base = name.map(|n| n.to_string()).unwrap_or_else(|| e.var.to_string());
    let fresh = table.fresh_symbol(&base);
    table.intern(fresh)
}

/// A mutation step: the variable to mutate at, optionally with the name of
/// the variable replacing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationStep {
    pub var: VarId,
    pub new_name: Option<String>,
}

impl From<VarId> for MutationStep {
    fn from(var: VarId) -> Self {
        MutationStep { var, new_name: None }
    }
}

pub fn mutate(
    seed: &Seed,
    i: usize,
    new_name: Option<&str>,
    table: &mut VarTable,
    bound: u32,
) -> Result<(Seed, MutationRecord), MutationError> {
    if i >= seed.len() {
        return Err(MutationError::NoSuchEntry(i));
    }
    let new_var = match new_name {
        Some(name) => {
            let id = single_variable(name, table).ok_or_else(|| MutationError::NameInUse(name.to_string()))?;
            if seed.mentions(id) {
                return Err(MutationError::NameInUse(name.to_string()));
            }
            id
        }
        None => default_new_var(seed, i, table),
    };
    mutate_as(seed, i, new_var, bound)
}

/// Left-to-right composition of mutations.
pub fn mutate_sequence<S: Into<MutationStep> + Clone>(
    seed: &Seed,
    steps: &[S],
    table: &mut VarTable,
    bound: u32,
) -> Result<(Seed, MutationLog), MutationError> {
    let mut cur = seed.clone();
    let mut log = MutationLog::default();
    for (position, step) in steps.iter().enumerate() {
        let step: MutationStep = step.clone().into();
        let wrap = |e| MutationError::Sequence {
            position,
            source: Box::new(e),
        };
        let name = table.name(step.var).map(|n| n.to_string()).unwrap_or_else(|| step.var.to_string());
        let i = cur.position(step.var).ok_or_else(|| wrap(MutationError::NotClusterVariable(name)))?;
        let (next, record) = mutate(&cur, i, step.new_name.as_deref(), table, bound).map_err(wrap)?;
        log.records.push(record);
        cur = next;
    }
    Ok((cur, log))
}

fn single_variable(name: &str, table: &mut VarTable) -> Option<VarId> {
    let p = parse(name, table).ok()?;
    let (m, c) = p.as_monomial()?;
    match m.exponents() {
        [(v, 1)] if num_traits::One::is_one(c) => Some(*v),
        _ => None,
    }
}

/// Expresses every variable created by `log` in the cluster and frozen
/// variables of the seed the log started from, failing if one is not a Laurent polynomial there.
pub fn cluster_expansions(log: &MutationLog) -> Result<BTreeMap<VarId, LaurentPoly>, MutationError> {
    let mut known: BTreeMap<VarId, LaurentPoly> = BTreeMap::new();
    for r in &log.records {
        // x * x' = hat, with hat written in the cluster current at this step.
        let (m, q) = monomial_content(&r.hat.hat)?;
        let mut num = compose_polynomial(&q, &known)?;
        let mut den = expand_var(r.mutated, &known);
        for &(v, e) in m.exponents() {
            let xv = expand_var(v, &known);
            let pow = xv.pow(e.unsigned_abs())?;
            if e > 0 {
                num = &num * &pow;
            } else {
                den = &den * &pow;
            }
        }
        let value = exact_div(&num, &den).map_err(|e| match e {
            AlgebraError::NotDivisible => MutationError::NotLaurent(r.new_var),
            other => other.into(),
        })?;
        known.insert(r.new_var, value);
    }
    Ok(known)
}

fn expand_var(v: VarId, known: &BTreeMap<VarId, LaurentPoly>) -> LaurentPoly {
    known.get(&v).cloned().unwrap_or_else(|| LaurentPoly::var(v))
}

/// Substitutes `known[v]` for each variable `v` of the polynomial `p`.
pub(crate) fn compose_polynomial(
    p: &LaurentPoly,
    known: &BTreeMap<VarId, LaurentPoly>,
) -> Result<LaurentPoly, AlgebraError> {
    let mut powers: BTreeMap<(VarId, i32), LaurentPoly> = BTreeMap::new();
    let mut out = LaurentPoly::zero();
    for (m, c) in p.terms() {
        let mut term = LaurentPoly::constant(c.clone());
        for &(v, e) in m.exponents() {
            let pw = match powers.entry((v, e)) {
                std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
                std::collections::btree_map::Entry::Vacant(slot) => slot.insert(expand_var(v, known).pow(e as u32)?),
            };
            term = &term * &*pw;
        }
        out = &out + &term;
    }
    Ok(out)
}
