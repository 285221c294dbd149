use std::collections::HashMap;
use std::fmt;

use super::VarId;

/// Abstract identity of a variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarName {
    /// Lattice variable `tau[t;n1,...,nd]`.
    Tau { t: i64, point: Vec<i64> },
    /// Free-standing symbol such as `a`, `c'` or `x_3`.
    Symbol(String),
}

impl VarName {
    pub fn tau(t: i64, point: &[i64]) -> Self {
        VarName::Tau {
            t,
            point: point.to_vec(),
        }
    }

    pub fn symbol(s: impl Into<String>) -> Self {
        VarName::Symbol(s.into())
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarName::Symbol(s) => f.write_str(s),
            VarName::Tau { t, point } => {
                write!(f, "tau[{t};")?;
                for (i, c) in point.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Bidirectional registry between variable names and dense [`VarId`]s.
///
/// Ids are handed out in registration order and never reused.
#[derive(Clone, Debug, Default)]
pub struct VarTable {
    names: Vec<VarName>,
    index: HashMap<VarName, VarId>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `name`, registering it if it is new.
    pub fn intern(&mut self, name: VarName) -> VarId {
        if let Some(&id) = self.index.get(&name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.clone());
        self.index.insert(name, id);
        id
    }

    pub fn symbol(&mut self, s: &str) -> VarId {
        self.intern(VarName::symbol(s))
    }

    pub fn tau(&mut self, t: i64, point: &[i64]) -> VarId {
        self.intern(VarName::tau(t, point))
    }

    pub fn lookup(&self, name: &VarName) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> Option<&VarName> {
        self.names.get(id.index())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Produces a name not yet in the table, derived from `base` by appending primes.
    pub fn fresh_symbol(&self, base: &str) -> VarName {
        let mut s = format!("{base}'");
        while self.index.contains_key(&VarName::Symbol(s.clone())) {
            s.push('\'');
        }
        VarName::Symbol(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &VarName)> {
        self.names.iter().enumerate().map(|(i, n)| (VarId(i as u32), n))
    }
}
