use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{parse, serialize, LaurentPoly, ParseError, VarId, VarName, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("variable {0} appears twice in the seed")]
    DuplicateVariable(VarId),
    #[error("cluster variable {0} is also listed as frozen")]
    FrozenClusterVariable(VarId),
    #[error("exchange polynomial of {0} is zero or a unit")]
    DegenerateExchange(VarId),
    #[error("exchange polynomial of {0} has a negative exponent")]
    NotPolynomial(VarId),
    #[error("exchange polynomial of {var} is divisible by variable {divisor}")]
    DivisibleByVariable { var: VarId, divisor: VarId },
    #[error("exchange polynomial of {0} contains its own variable")]
    ContainsOwnVariable(VarId),
    #[error("exchange polynomial of {var} mentions {other}, which is neither a cluster nor a frozen variable")]
    UnknownVariable { var: VarId, other: VarId },
}

/// One cluster variable and its exchange polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedEntry {
    pub var: VarId,
    pub exchange: LaurentPoly,
    /// The variable this one replaced by mutation, if any.
    pub origin: Option<VarId>,
}

impl SeedEntry {
    pub fn new(var: VarId, exchange: LaurentPoly) -> Self {
        SeedEntry {
            var,
            exchange,
            origin: None,
        }
    }
}

/// A seed: cluster variables paired with exchange polynomials, plus frozen
/// variables that may occur in exchange polynomials but are never mutated.
///
/// Construction checks that no exchange polynomial mentions its own variable
/// or is divisible by a variable. Irreducibility is assumed, not checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    entries: Vec<SeedEntry>,
    frozen: BTreeSet<VarId>,
    index: BTreeMap<VarId, usize>,
}

impl Seed {
    pub fn new(entries: Vec<SeedEntry>, frozen: BTreeSet<VarId>) -> Result<Self, SeedError> {
        let mut index = BTreeMap::new();
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.var, i).is_some() {
                return Err(SeedError::DuplicateVariable(e.var));
            }
            if frozen.contains(&e.var) {
                return Err(SeedError::FrozenClusterVariable(e.var));
            }
        }
        let seed = Seed {
            entries,
            frozen,
            index,
        };
        for i in 0..seed.entries.len() {
            seed.check_entry(i)?;
        }
        Ok(seed)
    }

    pub(crate) fn from_parts_unchecked(entries: Vec<SeedEntry>, frozen: BTreeSet<VarId>) -> Self {
        let index = entries.iter().enumerate().map(|(i, e)| (e.var, i)).collect();
        Seed {
            entries,
            frozen,
            index,
        }
    }

    pub(crate) fn check_entry(&self, i: usize) -> Result<(), SeedError> {
        let e = &self.entries[i];
        let f = &e.exchange;
        if f.is_zero() || f.is_unit() {
            return Err(SeedError::DegenerateExchange(e.var));
        }
        if !f.is_polynomial() {
            return Err(SeedError::NotPolynomial(e.var));
        }
        if f.contains_var(e.var) {
            return Err(SeedError::ContainsOwnVariable(e.var));
        }
        for v in f.vars() {
            if !self.index.contains_key(&v) && !self.frozen.contains(&v) {
                return Err(SeedError::UnknownVariable { var: e.var, other: v });
            }
            if f.degree_range(v).is_some_and(|(lo, _)| lo > 0) {
                return Err(SeedError::DivisibleByVariable { var: e.var, divisor: v });
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[SeedEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &SeedEntry {
        &self.entries[i]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn frozen(&self) -> &BTreeSet<VarId> {
        &self.frozen
    }

    pub fn position(&self, var: VarId) -> Option<usize> {
        self.index.get(&var).copied()
    }

    pub fn exchange_of(&self, var: VarId) -> Option<&LaurentPoly> {
        self.position(var).map(|i| &self.entries[i].exchange)
    }

    /// Whether `v` is a cluster or frozen variable of this seed.
    pub fn mentions(&self, v: VarId) -> bool {
        self.index.contains_key(&v) || self.frozen.contains(&v)
    }

    /// Equality of clusters, exchange polynomials and frozen sets, ignoring
    /// the mutation history recorded in [`SeedEntry::origin`].
    pub fn same_as(&self, other: &Seed) -> bool {
        self.frozen == other.frozen
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.var == b.var && a.exchange == b.exchange)
    }

    pub fn to_text(&self, table: &VarTable) -> String {
        let name = |v: VarId| table.name(v).map(|n| n.to_string()).unwrap_or_else(|| v.to_string());
        let mut out = String::new();
        if !self.frozen.is_empty() {
            let names: Vec<String> = self.frozen.iter().map(|&v| name(v)).collect();
            let _ = writeln!(out, "frozen: {}", names.join(" "));
        }
        for e in &self.entries {
            let _ = writeln!(out, "{} = {}", name(e.var), serialize(&e.exchange, table));
        }
        out
    }

    pub fn to_report(&self, table: &VarTable) -> SeedReport {
        let name = |v: VarId| table.name(v).map(|n| n.to_string()).unwrap_or_else(|| v.to_string());
        SeedReport {
            entries: self
                .entries
                .iter()
                .map(|e| EntryReport {
                    var: name(e.var),
                    exchange: serialize(&e.exchange, table),
                })
                .collect(),
            frozen: self.frozen.iter().map(|&v| name(v)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EntryReport {
    pub var: String,
    pub exchange: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeedReport {
    pub entries: Vec<EntryReport>,
    pub frozen: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Polynomial { line: usize, source: ParseError },
    #[error(transparent)]
    Seed(#[from] SeedError),
}

/// Parses the seed text format:
///
/// ```text
/// # comment
/// frozen: u v
/// a = b + 1
/// b = a^2 + 2*a + 1 + c^2
/// c = b^2 + b + a^3 + a^2
/// ```
///
/// Entries keep file order. Variable names are interned in `table` in order
/// of first appearance, cluster variables first.
pub fn parse_seed(text: &str, table: &mut VarTable) -> Result<Seed, SeedFileError> {
    let mut frozen = BTreeSet::new();
    let mut pending: Vec<(usize, VarId, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("frozen:") {
            for name in rest.split_whitespace() {
                frozen.insert(intern_name(name, line_no, table)?);
            }
            continue;
        }
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| SeedFileError::Syntax {
            line: line_no,
            message: "expected `var = polynomial` or `frozen: ...`".into(),
        })?;
        let var = intern_name(lhs.trim(), line_no, table)?;
        pending.push((line_no, var, rhs));
    }
    let mut entries = Vec::with_capacity(pending.len());
    for (line, var, rhs) in pending {
        let exchange = parse(rhs, table).map_err(|source| SeedFileError::Polynomial { line, source })?;
        entries.push(SeedEntry::new(var, exchange));
    }
    Ok(Seed::new(entries, frozen)?)
}

fn intern_name(name: &str, line: usize, table: &mut VarTable) -> Result<VarId, SeedFileError> {
    let p = parse(name, table).map_err(|source| SeedFileError::Polynomial { line, source })?;
    match p.as_monomial() {
        Some((m, c)) if num_traits::One::is_one(c) && m.exponents().len() == 1 && m.exponents()[0].1 == 1 => {
            Ok(m.exponents()[0].0)
        }
        _ => Err(SeedFileError::Syntax {
            line,
            message: format!("`{name}` is not a variable name"),
        }),
    }
}

/// Builds the variable name of a tau variable two layers up, used when a
/// lattice variable is mutated.
pub(crate) fn advanced_tau(name: &VarName) -> Option<VarName> {
    match name {
        VarName::Tau { t, point } => Some(VarName::tau(t + 2, point)),
        VarName::Symbol(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABC: &str = "\
# three-variable seed
a = b + 1
b = a^2 + 2*a + 1 + c^2
c = b^2 + b + a^3 + a^2
";

    #[test]
    fn parse_and_print_round_trip() {
        let mut table = VarTable::new();
        let seed = parse_seed(ABC, &mut table).unwrap();
        assert_eq!(seed.len(), 3);
        let text = seed.to_text(&table);
        let again = parse_seed(&text, &mut table).unwrap();
        assert_eq!(seed, again);
    }

    #[test]
    fn constructor_checks() {
        let mut table = VarTable::new();
        let bad = "a = a + 1\nb = a + 1\n";
        assert!(matches!(
            parse_seed(bad, &mut table),
            Err(SeedFileError::Seed(SeedError::ContainsOwnVariable(_)))
        ));
        let bad = "a = b^2 + b\nb = a + 1\n";
        assert!(matches!(
            parse_seed(bad, &mut table),
            Err(SeedFileError::Seed(SeedError::DivisibleByVariable { .. }))
        ));
        let bad = "a = b + q\nb = a + 1\n";
        assert!(matches!(
            parse_seed(bad, &mut table),
            Err(SeedFileError::Seed(SeedError::UnknownVariable { .. }))
        ));
        let ok = "frozen: q\na = b + q\nb = a + 1\n";
        assert_eq!(parse_seed(ok, &mut table).unwrap().frozen().len(), 1);
        assert!(matches!(parse_seed("a + 1\n", &mut table), Err(SeedFileError::Syntax { line: 1, .. })));
        assert!(matches!(parse_seed("2*a = b\n", &mut table), Err(SeedFileError::Syntax { .. })));
    }

    #[test]
    fn frozen_variables_may_not_divide() {
        let mut table = VarTable::new();
        assert!(matches!(
            parse_seed("frozen: q\na = q*b + q\nb = a + 1\n", &mut table),
            Err(SeedFileError::Seed(SeedError::DivisibleByVariable { .. }))
        ));
    }
}
