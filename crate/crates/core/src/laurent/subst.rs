use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Signed;

use super::{LaurentPoly, Monomial, VarId};
use crate::error::AlgebraError;
use crate::scalar::Scalar;

/// Replaces `v` by `num / den` in `p`.
///
/// Negative powers of `v` are only allowed when `num` is a unit (`±` a
/// monomial), since otherwise the result leaves the Laurent ring.
pub fn substitute(
    p: &LaurentPoly,
    v: VarId,
    num: &LaurentPoly,
    den: &Monomial,
) -> Result<LaurentPoly, AlgebraError> {
    let mut by_power: BTreeMap<i32, Vec<(Monomial, BigInt)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (e, rest) = m.split_var(v);
        by_power.entry(e).or_default().push((rest, c.clone()));
    }
    if by_power.len() == 1 && by_power.contains_key(&0) {
        return Ok(p.clone());
    }
    if by_power.keys().any(|&e| e < 0) && !num.is_unit() {
        return Err(AlgebraError::NonLaurentSubstitution { var: v });
    }
    let max_e = *by_power.keys().next_back().unwrap();
    // Ascending powers of num, built incrementally.
    let mut powers: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    for _ in 1..=max_e.max(0) {
        let next = powers.last().unwrap().mul(num);
        powers.push(next);
    }
    let mut out = LaurentPoly::zero();
    for (e, terms) in by_power {
        let coeff = LaurentPoly::from_terms(terms);
        let replaced = if e >= 0 {
            powers[e as usize].clone()
        } else {
            let (m, c) = num.as_monomial().expect("checked unit");
            let sign = if c.is_negative() && e % 2 != 0 { -1 } else { 1 };
            LaurentPoly::term(m.pow(e), sign)
        };
        out = out.add(&coeff.mul(&replaced).mul_monomial(&den.pow(-e)));
    }
    Ok(out)
}

/// Exact evaluation at an assignment of every occurring variable.
pub fn eval_at<S: Scalar>(p: &LaurentPoly, assignment: &HashMap<VarId, S>) -> Result<S, AlgebraError> {
    let mut total = S::zero();
    for (m, c) in p.terms() {
        let mut term = S::from_bigint(c);
        for &(w, e) in m.exponents() {
            let x = assignment.get(&w).ok_or(AlgebraError::Unassigned(w))?;
            if e < 0 {
                if x.is_zero() {
                    return Err(AlgebraError::ZeroToNegativePower);
                }
                let inv = S::one() / x.clone();
                term = term * num_traits::pow(inv, (-e) as usize);
            } else {
                term = term * num_traits::pow(x.clone(), e as usize);
            }
        }
        total = total + term;
    }
    Ok(total)
}
