use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{DegreeStats, Monomial, VarId};
use crate::error::AlgebraError;

// Products with more term pairs than this are split across threads.
const PARALLEL_MUL_THRESHOLD: usize = 1 << 16;

/// Sparse multivariate Laurent polynomial with arbitrary-precision integer
/// coefficients.
///
/// Terms are stored in graded-lex descending order with no zero
/// coefficients, so structural equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), 1)
    }

    pub fn var_pow(v: VarId, e: i32) -> Self {
        Self::term(Monomial::var_pow(v, e), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: vec![(m, c)] }
    }

    /// Collects arbitrary terms, merging equal monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Self { terms }
    }

    /// Wraps terms that are already sorted descending, distinct and nonzero.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Self { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigInt)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The single term, when the polynomial is a (scaled) monomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    /// True for `±m`, the units of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        matches!(self.as_monomial(), Some((_, c)) if c.abs().is_one())
    }

    pub fn as_constant(&self) -> Option<&BigInt> {
        match self.as_monomial() {
            Some((m, c)) if m.is_one() => Some(c),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// All exponents non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_polynomial())
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) != 0)
    }

    /// Minimum and maximum exponent of `v` over all terms (absent counts as 0).
    pub fn degree_range(&self, v: VarId) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().map(|(m, _)| m.exponent(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn degree_stats(&self) -> DegreeStats {
        if self.is_zero() {
            return DegreeStats::Empty;
        }
        let degs = self.terms.iter().map(|(m, _)| m.total_degree());
        DegreeStats::Nonempty {
            term_count: self.terms.len(),
            max_total_degree: degs.clone().max().unwrap(),
            min_total_degree: degs.min().unwrap(),
            span: self.terms.iter().map(|(m, _)| m.span()).max().unwrap(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by a monomial; ordering is preserved because graded-lex is
    /// compatible with multiplication.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &BigInt| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0.clone(), rhs(&b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Self { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        if let Some((m, c)) = small.as_monomial() {
            let scaled = big.mul_monomial(m);
            return if c.is_one() { scaled } else { scaled.scale(c) };
        }
        if small.len() * big.len() < PARALLEL_MUL_THRESHOLD {
            return Self::from_map(accumulate(&small.terms, &big.terms));
        }
        let chunk = (small.len() / rayon::current_num_threads().max(1)).max(1);
        let partial: Vec<FxHashMap<Monomial, BigInt>> = small
            .terms
            .par_chunks(chunk)
            .map(|part| accumulate(part, &big.terms))
            .collect();
        let mut it = partial.into_iter();
        let mut acc = it.next().unwrap_or_default();
        for map in it {
            for (m, c) in map {
                *acc.entry(m).or_insert_with(BigInt::zero) += c;
            }
        }
        Self::from_map(acc)
    }

    /// `self^e` for `e >= 0`; `0^0` is rejected.
    pub fn pow(&self, e: u32) -> Result<Self, AlgebraError> {
        if e == 0 {
            return if self.is_zero() {
                Err(AlgebraError::ZeroToZerothPower)
            } else {
                Ok(Self::one())
            };
        }
        if let Some((m, c)) = self.as_monomial() {
            return Ok(Self::term(m.pow(e as i32), num_traits::pow(c.clone(), e as usize)));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Integer gcd of all coefficients (zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Sets the variable `v` to zero. Fails if `v` occurs with a negative exponent.
    pub fn truncate_var(&self, v: VarId) -> Result<Self, AlgebraError> {
        if self.terms.iter().any(|(m, _)| m.exponent(v) < 0) {
            return Err(AlgebraError::ZeroToNegativePower);
        }
        Ok(Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) == 0)
                .cloned()
                .collect(),
        })
    }
}

fn accumulate(a: &[(Monomial, BigInt)], b: &[(Monomial, BigInt)]) -> FxHashMap<Monomial, BigInt> {
    let mut acc: FxHashMap<Monomial, BigInt> =
        FxHashMap::with_capacity_and_hasher((a.len() * b.len() / 2 + 1).min(1 << 16), Default::default());
    for (ma, ca) in a {
        for (mb, cb) in b {
            let c = ca * cb;
            match acc.entry(ma.mul(mb)) {
                std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += c,
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
    }
    acc
}

impl From<VarId> for LaurentPoly {
    fn from(v: VarId) -> Self {
        LaurentPoly::var(v)
    }
}

impl From<Monomial> for LaurentPoly {
    fn from(m: Monomial) -> Self {
        LaurentPoly::term(m, 1)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inherent:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                LaurentPoly::$inherent(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                LaurentPoly::$inherent(&self, &rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                LaurentPoly::$inherent(&self, rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                LaurentPoly::$inherent(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(&self)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

impl fmt::Display for LaurentPoly {
    /// Uses generic `v<id>` names; see [`super::text::serialize`] for table-aware output.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::serialize_with(self, &|v: VarId| v.to_string()))
    }
}
