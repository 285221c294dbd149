use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Dense index of a variable registered in a [`VarTable`](super::VarTable).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

type Exps = SmallVec<[(VarId, i32); 6]>;

/// A Laurent monomial: sparse map from variables to nonzero integer exponents,
/// kept sorted by variable id.
///
/// `Ord` is graded-lex: total degree first, then the exponent of the
/// lowest-numbered variable where the two monomials differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Exps,
    degree: i64,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VarId) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: i32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut exps = Exps::new();
        exps.push((v, e));
        Self { exps, degree: e as i64 }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, i32)>>(pairs: I) -> Self {
        let mut v: Vec<(VarId, i32)> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut exps = Exps::new();
        for (var, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => exps.push((var, e)),
            }
        }
        exps.retain(|p| p.1 != 0);
        Self::from_sorted(exps)
    }

    fn from_sorted(exps: Exps) -> Self {
        let degree = exps.iter().map(|p| p.1 as i64).sum();
        Self { exps, degree }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(VarId, i32)] {
        &self.exps
    }

    pub fn exponent(&self, v: VarId) -> i32 {
        match self.exps.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.degree
    }

    /// Sum of absolute exponents.
    pub fn span(&self) -> i64 {
        self.exps.iter().map(|p| (p.1 as i64).abs()).sum()
    }

    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|p| p.1 > 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut out = Exps::with_capacity(self.exps.len() + other.exps.len());
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial {
            exps: out,
            degree: self.degree + other.degree,
        }
    }

    pub fn inverse(&self) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
            degree: -self.degree,
        }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, e: i32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, x)| (v, x * e)).collect(),
            degree: self.degree * e as i64,
        }
    }

    /// True when `other` divides `self` inside the polynomial monoid, i.e.
    /// every exponent of `other` is at most the matching exponent of `self`.
    pub fn is_divisible_by(&self, other: &Monomial) -> bool {
        other.exps.iter().all(|&(v, e)| self.exponent(v) >= e)
            && self.exps.iter().all(|&(v, e)| e >= 0 || other.exponent(v) <= e)
    }

    /// Removes the variable `v`, returning its exponent and the remaining monomial.
    pub fn split_var(&self, v: VarId) -> (i32, Monomial) {
        match self.exps.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => {
                let e = self.exps[i].1;
                let mut rest = self.exps.clone();
                rest.remove(i);
                (
                    e,
                    Monomial {
                        exps: rest,
                        degree: self.degree - e as i64,
                    },
                )
            }
            Err(_) => (0, self.clone()),
        }
    }

    /// Componentwise minimum with implicit zeros (the gcd in the Laurent sense).
    pub fn meet(&self, other: &Monomial) -> Monomial {
        let mut out = Exps::new();
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, ea, eb) = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                    (x.0, x.1, y.1)
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    i += 1;
                    (x.0, x.1, 0)
                }
                (Some(x), None) => {
                    i += 1;
                    (x.0, x.1, 0)
                }
                (_, Some(y)) => {
                    j += 1;
                    (y.0, 0, y.1)
                }
                (None, None) => unreachable!(),
            };
            let m = ea.min(eb);
            if m != 0 {
                out.push((v, m));
            }
        }
        Monomial::from_sorted(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|p| p.0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| lex_cmp(&self.exps, &other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Lex on dense exponent vectors, lowest variable id most significant.
fn lex_cmp(a: &[(VarId, i32)], b: &[(VarId, i32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(x), None) => return x.1.cmp(&0),
            (None, Some(y)) => return 0.cmp(&y.1),
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Equal => {
                    if x.1 != y.1 {
                        return x.1.cmp(&y.1);
                    }
                    i += 1;
                    j += 1;
                }
                Ordering::Less => return x.1.cmp(&0),
                Ordering::Greater => return 0.cmp(&y.1),
            },
        }
    }
}
