//! Images of lattice values on a signed line.
//!
//! Substituting `v -> c_v s^{sigma_v}` (random `c_v`, signs `sigma_v = ±1`)
//! maps a Laurent polynomial to a univariate one over `Z/(2^61-1)`. The map is
//! a ring homomorphism, so the recurrence can be run on images directly, and
//! the top `s`-degree of an image never exceeds `max_m sigma.e_m`. Every image
//! therefore gives a lower bound on the span, cheaply, long after the full
//! symbolic values have become too large to expand.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{box_points, LatticePoint, LatticeState, StepError, StepOptions, TodaParams};
use crate::modp;
use crate::scalar::{DivFailure, LatticeValue};

/// Univariate Laurent polynomial mod `2^61 - 1`: `coeffs[i]` multiplies
/// `s^(low + i)`. Both ends of `coeffs` are nonzero; zero is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineImage {
    low: i64,
    coeffs: Vec<u64>,
}

impl LineImage {
    pub fn zero() -> Self {
        LineImage { low: 0, coeffs: Vec::new() }
    }

    pub fn monomial(c: u64, degree: i64) -> Self {
        LineImage { low: degree, coeffs: vec![c % modp::P] }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }
}

impl LatticeValue for LineImage {
    fn one() -> Self {
        LineImage::monomial(1, 0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return LineImage::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = modp::add(out[i + j], modp::mul(a, b));
            }
        }
        LineImage { low: self.low + rhs.low, coeffs: out }.normalized()
    }

    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.max_degree().unwrap().max(rhs.max_degree().unwrap());
        let mut out = vec![0u64; (high - low + 1) as usize];
        for x in [self, rhs] {
            let off = (x.low - low) as usize;
            for (i, &c) in x.coeffs.iter().enumerate() {
                out[off + i] = modp::add(out[off + i], c);
            }
        }
        LineImage { low, coeffs: out }.normalized()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn try_div(&self, divisor: &Self) -> Result<Self, DivFailure> {
        if divisor.is_zero() {
            return Err(DivFailure::ByZero);
        }
        if self.is_zero() {
            return Ok(LineImage::zero());
        }
        let b = &divisor.coeffs;
        if self.coeffs.len() < b.len() {
            return Err(DivFailure::NotDivisible);
        }
        let inv = modp::inv(*b.last().unwrap());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - b.len() + 1];
        for shift in (0..q.len()).rev() {
            let f = modp::mul(r[shift + b.len() - 1], inv);
            q[shift] = f;
            if f != 0 {
                for (i, &bc) in b.iter().enumerate() {
                    r[shift + i] = modp::sub(r[shift + i], modp::mul(f, bc));
                }
            }
        }
        if r.iter().any(|&c| c != 0) {
            return Err(DivFailure::NotDivisible);
        }
        Ok(LineImage {
            low: self.low - divisor.low,
            coeffs: q,
        }
        .normalized())
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }
}

/// Evolves random line images of the generic initial data on the full window.
///
/// Exact division of the images is necessary for the Laurent property, so a
/// failure here refutes it; success is evidence only.
pub fn line_image_evolution(
    params: &TodaParams,
    radius: i64,
    t_max: u32,
    seed: u64,
) -> super::Evolution<LineImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = box_points(params.dim(), radius);
    let mut draw = || {
        pts.iter()
            .map(|p| {
                let sign = if rng.gen() { 1 } else { -1 };
                (p.clone(), LineImage::monomial(rng.gen_range(2..modp::P), sign))
            })
            .collect::<BTreeMap<_, _>>()
    };
    let l0 = draw();
    let l1 = draw();
    LatticeState::from_fn(params.clone(), radius, |p| l0[p].clone(), |p| l1[p].clone()).evolve(t_max)
}

/// Best span lower bound found at the window center for one layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpanLowerBound {
    pub t: u32,
    pub span_at_least: i64,
}

/// Variables the window center at `t_max` depends on, as `(layer, point)`.
fn cone_variables(params: &TodaParams, t_max: u32) -> Vec<(u8, LatticePoint)> {
    let reach = |layer: u32| (t_max as i64 - layer.max(1) as i64 - (layer == 0) as i64).max(0);
    let mut out = Vec::new();
    for layer in 0..2u32 {
        for p in box_points(params.dim(), reach(layer)) {
            if p.0.iter().map(|c| c.abs()).sum::<i64>() <= reach(layer) {
                out.push((layer as u8, p));
            }
        }
    }
    out
}

/// Lower bounds on the center span for `t = 0..=t_max` by hill climbing over
/// sign vectors `sigma`, on a window just large enough for `t_max`.
///
/// Each evaluation yields `max(deg_max, -deg_min)` of the image, which is at
/// most `max_m |e_m|_1`. Flips are tried variable by variable and kept when
/// the bound at `t_max` grows; the search restarts from `restarts` random
/// sign vectors plus the all-positive one. Returns an error only if the
/// evolution of the images fails, which would refute the Laurent property.
pub fn span_lower_bounds(
    params: &TodaParams,
    t_max: u32,
    seed: u64,
    restarts: usize,
) -> Result<Vec<SpanLowerBound>, StepError> {
    let radius = t_max.saturating_sub(1).max(1) as i64;
    let vars = cone_variables(params, t_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeff: Vec<u64> = vars.iter().map(|_| rng.gen_range(2..modp::P)).collect();
    let index: BTreeMap<(u8, LatticePoint), usize> =
        vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let opts = StepOptions {
        term_budget: None,
        center_target: Some(t_max),
    };
    let center = LatticePoint::origin(params.dim());

    let evaluate = |sigma: &[i64]| -> Result<Vec<i64>, StepError> {
        let value = |layer: u8, p: &LatticePoint| match index.get(&(layer, p.clone())) {
            Some(&i) => LineImage::monomial(coeff[i], sigma[i]),
            None => LineImage::one(),
        };
        let ev = LatticeState::from_fn(params.clone(), radius, |p| value(0, p), |p| value(1, p))
            .evolve_with(t_max, opts);
        if let Some(e) = ev.halted {
            return Err(e);
        }
        Ok(ev
            .layers
            .iter()
            .map(|l| {
                let img = &l.values[&center];
                img.max_degree().unwrap_or(0).max(-img.min_degree().unwrap_or(0))
            })
            .collect())
    };

    let mut best = vec![0i64; t_max as usize + 1];
    let absorb = |bounds: &[i64], best: &mut Vec<i64>| {
        for (b, &x) in best.iter_mut().zip(bounds) {
            *b = (*b).max(x);
        }
    };
    let starts: Vec<Vec<i64>> = std::iter::once(vec![1; vars.len()])
        .chain((0..restarts).map(|_| vars.iter().map(|_| if rng.gen() { 1 } else { -1 }).collect()))
        .collect();
    for mut sigma in starts {
        let mut current = evaluate(&sigma)?;
        absorb(&current, &mut best);
        loop {
            let mut improved = false;
            for i in 0..sigma.len() {
                sigma[i] = -sigma[i];
                let trial = evaluate(&sigma)?;
                absorb(&trial, &mut best);
                if trial[t_max as usize] > current[t_max as usize] {
                    current = trial;
                    improved = true;
                } else {
                    sigma[i] = -sigma[i];
                }
            }
            if !improved {
                break;
            }
        }
    }
    Ok(best
        .into_iter()
        .enumerate()
        .map(|(t, span_at_least)| SpanLowerBound {
            t: t as u32,
            span_at_least,
        })
        .collect())
}
