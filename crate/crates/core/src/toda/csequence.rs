use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::TodaParams;
use crate::scalar::Scalar;

/// The spatially homogeneous solution: `c_{t+1} c_{t-1} = c_t^{W1} + c_t^{W2}`
/// with `W1 = sum_{i<=a} (k_i + l_i)` and `W2` the same over the second group.
#[derive(Clone, Debug, Serialize)]
pub struct CSequence<S> {
    pub values: Vec<S>,
    pub all_integral: bool,
    /// `c_2 < c_3 < ...` (vacuously true for fewer than two such values).
    pub strictly_increasing_from_2: bool,
}

/// Iterates the scalar recurrence from `c0, c1` up to index `t_max`.
/// Callers should pass positive starting values, which keep every divisor nonzero.
pub fn c_sequence<S: Scalar>(params: &TodaParams, c0: S, c1: S, t_max: u32) -> CSequence<S> {
    let [w1, w2] = params.group_weights();
    let mut values = vec![c0];
    if t_max >= 1 {
        values.push(c1);
    }
    while values.len() <= t_max as usize {
        let n = values.len();
        let (prev, curr) = (&values[n - 2], &values[n - 1]);
        let rhs = num_traits::pow(curr.clone(), w1 as usize) + num_traits::pow(curr.clone(), w2 as usize);
        values.push(rhs / prev.clone());
    }
    let all_integral = values.iter().all(Scalar::is_integral);
    let strictly_increasing_from_2 = values.iter().skip(2).collect::<Vec<_>>().windows(2).all(|w| w[0] < w[1]);
    CSequence {
        values,
        all_integral,
        strictly_increasing_from_2,
    }
}

/// Integer factor in a [`FactoredCSequence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Atom {
    Two,
    /// `1 + c_s^d`, with `d` the difference of the group weights.
    OnePlusPower { s: usize },
}

/// `c_t` for `c0 = c1 = 1` kept as a product of integer atoms.
///
/// Writing the right-hand side as `c_t^m (1 + c_t^d)` with `m = min(W1, W2)`
/// and `d = |W1 - W2|`, each step multiplies by one new atom and divides by
/// `c_{t-1}`, so the exponent vectors obey a linear recurrence and never
/// require the (astronomically large) integers themselves. Nonnegative
/// exponents certify integrality; a nonnegative nonzero difference between
/// consecutive vectors certifies `c_t < c_{t+1}` since every atom is at least 2.
#[derive(Clone, Debug, Serialize)]
pub struct FactoredCSequence {
    pub d: u32,
    pub atoms: Vec<Atom>,
    /// `exponents[t][j]` is the power of `atoms[j]` in `c_t`.
    pub exponents: Vec<Vec<i128>>,
    pub log10_values: Vec<f64>,
    pub integral_certified: bool,
    pub increasing_from_2_certified: bool,
}

impl FactoredCSequence {
    fn atom_log10(&self, j: usize) -> f64 {
        match self.atoms[j] {
            Atom::Two => std::f64::consts::LOG10_2,
            Atom::OnePlusPower { s } => {
                let l = self.d as f64 * self.log10_values[s];
                if l > 17.0 {
                    l
                } else {
                    (1.0 + 10f64.powf(l)).log10()
                }
            }
        }
    }

    /// Multiplies out `c_t`, refusing when it would exceed `max_digits`
    /// or when an exponent is negative.
    pub fn value(&self, t: usize, max_digits: f64) -> Option<BigInt> {
        if self.log10_values[t] > max_digits {
            return None;
        }
        let mut out = BigInt::one();
        for (j, &e) in self.exponents[t].iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = usize::try_from(e).ok()?;
            let atom = match self.atoms[j] {
                Atom::Two => BigInt::from(2),
                Atom::OnePlusPower { s } => {
                    BigInt::one() + num_traits::pow(self.value(s, max_digits)?, self.d as usize)
                }
            };
            out *= num_traits::pow(atom, e);
        }
        Some(out)
    }
}

/// Builds the factored form of `c_0 = c_1 = 1, ..., c_{t_max}`.
pub fn c_sequence_factored(params: &TodaParams, t_max: u32) -> FactoredCSequence {
    let [w1, w2] = params.group_weights();
    let (m, d) = (w1.min(w2) as i128, w1.abs_diff(w2));
    let mut seq = FactoredCSequence {
        d,
        atoms: Vec::new(),
        exponents: vec![Vec::new(); 2.min(t_max as usize + 1)],
        log10_values: vec![0.0; 2.min(t_max as usize + 1)],
        integral_certified: true,
        increasing_from_2_certified: true,
    };
    for t in 1..t_max as usize {
        let atom = if d == 0 || seq.exponents[t].iter().all(|&e| e == 0) {
            Atom::Two
        } else {
            Atom::OnePlusPower { s: t }
        };
        let j = match seq.atoms.iter().position(|&a| a == atom) {
            Some(j) => j,
            None => {
                seq.atoms.push(atom);
                seq.atoms.len() - 1
            }
        };
        let n = seq.atoms.len();
        let get = |v: &Vec<i128>, i: usize| v.get(i).copied().unwrap_or(0);
        let next: Vec<i128> = (0..n)
            .map(|i| {
                m * get(&seq.exponents[t], i) + i128::from(i == j) - get(&seq.exponents[t - 1], i)
            })
            .collect();
        seq.exponents.push(next);
        let log = (0..n).map(|i| seq.exponents[t + 1][i] as f64 * seq.atom_log10(i)).sum();
        seq.log10_values.push(log);
    }
    let n = seq.atoms.len();
    for v in &mut seq.exponents {
        v.resize(n, 0);
    }
    seq.integral_certified = seq.exponents.iter().flatten().all(|&e| e >= 0);
    seq.increasing_from_2_certified = seq.exponents.iter().skip(2).collect::<Vec<_>>().windows(2).all(|w| {
        let diff: Vec<i128> = w[1].iter().zip(w[0]).map(|(a, b)| a - b).collect();
        diff.iter().all(|&x| x >= 0) && diff.iter().any(|&x| x > 0)
    });
    seq
}
