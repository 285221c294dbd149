use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{LaurentPoly, Monomial};
use crate::error::AlgebraError;

/// Splits `p = m * q` with `m` a monic Laurent monomial and `q` a polynomial
/// divisible by no variable. The sign stays in `q`.
pub fn monomial_content(p: &LaurentPoly) -> Result<(Monomial, LaurentPoly), AlgebraError> {
    let mut it = p.terms().iter();
    let first = it.next().ok_or(AlgebraError::ZeroArgument("monomial content"))?;
    let m = it.fold(first.0.clone(), |acc, (x, _)| acc.meet(x));
    if m.is_one() {
        return Ok((m, p.clone()));
    }
    let q = p.mul_monomial(&m.inverse());
    Ok((m, q))
}

/// Polynomial part of `p` (`p` with its monomial content removed).
pub fn polynomial_part(p: &LaurentPoly) -> LaurentPoly {
    match monomial_content(p) {
        Ok((_, q)) => q,
        Err(_) => LaurentPoly::zero(),
    }
}

/// Returns `r` with `r * q == p` in the Laurent ring, or
/// [`AlgebraError::NotDivisible`] if no such `r` exists.
pub fn exact_div(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
    if q.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    if p.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    if let Some((m, c)) = q.as_monomial() {
        return div_by_term(p, m, c);
    }
    let (mp, pp) = monomial_content(p)?;
    let (mq, qq) = monomial_content(q)?;
    let quot = poly_exact_div(&pp, &qq)?;
    Ok(quot.mul_monomial(&mp.div(&mq)))
}

fn div_by_term(p: &LaurentPoly, m: &Monomial, c: &BigInt) -> Result<LaurentPoly, AlgebraError> {
    let inv = m.inverse();
    if c.is_one() {
        return Ok(p.mul_monomial(&inv));
    }
    let mut terms = Vec::with_capacity(p.len());
    for (x, a) in p.terms() {
        let (d, r) = a.div_rem(c);
        if !r.is_zero() {
            return Err(AlgebraError::NotDivisible);
        }
        terms.push((x.mul(&inv), d));
    }
    Ok(LaurentPoly::from_sorted_unchecked(terms))
}

/// Division in `Z[x]` for polynomials (no negative exponents).
pub(crate) fn poly_exact_div(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
    if q.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    if p.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    if let Some((m, c)) = q.as_monomial() {
        let r = div_by_term(p, m, c)?;
        return if r.is_polynomial() {
            Ok(r)
        } else {
            Err(AlgebraError::NotDivisible)
        };
    }
    // Cheap degree screens before the long division.
    let (lmp, _) = p.leading_term().unwrap();
    let (lmq, lcq) = q.leading_term().unwrap();
    if lmp.total_degree() < lmq.total_degree() {
        return Err(AlgebraError::NotDivisible);
    }
    for v in q.vars() {
        let (_, dq) = q.degree_range(v).unwrap();
        let (_, dp) = p.degree_range(v).unwrap();
        if dp < dq {
            return Err(AlgebraError::NotDivisible);
        }
    }

    let mut rem: BTreeMap<Monomial, BigInt> = p.terms().iter().cloned().collect();
    let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
    while let Some((lm, lc)) = rem.pop_last() {
        if !lm.is_divisible_by(lmq) {
            return Err(AlgebraError::NotDivisible);
        }
        let (qc, r) = lc.div_rem(lcq);
        if !r.is_zero() {
            return Err(AlgebraError::NotDivisible);
        }
        let qm = lm.div(lmq);
        for (m, c) in q.terms().iter().skip(1) {
            let key = m.mul(&qm);
            let delta = &qc * c;
            match rem.entry(key) {
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() -= delta;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(-delta);
                }
            }
        }
        quot.push((qm, qc));
    }
    Ok(LaurentPoly::from_sorted_unchecked(quot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::VarId;

    fn v(i: u32) -> LaurentPoly {
        LaurentPoly::var(VarId(i))
    }
    fn c(n: i64) -> LaurentPoly {
        LaurentPoly::constant(n)
    }

    #[test]
    fn exact_div_examples() {
        let x = v(0);
        assert_eq!(exact_div(&(&(&x * &x) - &c(1)), &(&x - &c(1))).unwrap(), &x + &c(1));
        let (y1, y2, y3, y4) = (v(1), v(2), v(3), v(4));
        let p = &(&y1 * &y2) + &(&y3 * &y4);
        let xinv = LaurentPoly::var_pow(VarId(0), -1);
        assert_eq!(exact_div(&p, &x).unwrap(), &p * &xinv);
        assert_eq!(exact_div(&(&x + &c(1)), &(&x - &c(1))), Err(AlgebraError::NotDivisible));
        assert_eq!(exact_div(&x, &LaurentPoly::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn exact_div_with_monomial_parts() {
        let (x, y) = (v(0), v(1));
        let f = &(&x * &y) + &c(3);
        let g = &(&x * &x) - &y;
        let unit = Monomial::from_pairs([(VarId(0), -2), (VarId(1), 5)]);
        let prod = (&f * &g).mul_monomial(&unit);
        assert_eq!(exact_div(&prod, &g).unwrap(), f.mul_monomial(&unit));
        assert_eq!(exact_div(&prod.scale(&6.into()), &g.scale(&4.into())), Err(AlgebraError::NotDivisible));
    }

    #[test]
    fn monomial_content_examples() {
        let (x, y) = (v(0), v(1));
        let xinv = LaurentPoly::var_pow(VarId(0), -1);
        let p = &(&xinv * &(&y * &y)) + &(&xinv * &y);
        let (m, q) = monomial_content(&p).unwrap();
        assert_eq!(m, Monomial::from_pairs([(VarId(0), -1), (VarId(1), 1)]));
        assert_eq!(q, &y + &c(1));

        let (m, q) = monomial_content(&(&x + &c(1))).unwrap();
        assert!(m.is_one());
        assert_eq!(q, &x + &c(1));

        let (m, q) = monomial_content(&x.scale(&(-2).into())).unwrap();
        assert_eq!(m, Monomial::var(VarId(0)));
        assert_eq!(q, c(-2));

        assert!(monomial_content(&LaurentPoly::zero()).is_err());
    }
}
