use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("a + b must be at least 1")]
    EmptyDimension,
    #[error("expected {expected} entries in {which}, got {got}")]
    LengthMismatch { which: &'static str, expected: usize, got: usize },
    #[error("exponents must be positive integers ({which}[{index}] = 0)")]
    NonPositive { which: &'static str, index: usize },
}

/// Exponent data of the recurrence: the first `a` directions feed the first
/// product, the remaining `b` directions the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct TodaParams {
    a: usize,
    b: usize,
    k: Vec<u32>,
    l: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawParams {
    a: usize,
    b: usize,
    k: Vec<u32>,
    l: Vec<u32>,
}

impl TryFrom<RawParams> for TodaParams {
    type Error = ParamError;
    fn try_from(r: RawParams) -> Result<Self, ParamError> {
        TodaParams::new(r.a, r.b, r.k, r.l)
    }
}

impl From<TodaParams> for RawParams {
    fn from(p: TodaParams) -> Self {
        RawParams {
            a: p.a,
            b: p.b,
            k: p.k,
            l: p.l,
        }
    }
}

impl TodaParams {
    pub fn new(a: usize, b: usize, k: Vec<u32>, l: Vec<u32>) -> Result<Self, ParamError> {
        let d = a + b;
        if d == 0 {
            return Err(ParamError::EmptyDimension);
        }
        for (which, v) in [("k", &k), ("l", &l)] {
            if v.len() != d {
                return Err(ParamError::LengthMismatch {
                    which,
                    expected: d,
                    got: v.len(),
                });
            }
            if let Some(index) = v.iter().position(|&x| x == 0) {
                return Err(ParamError::NonPositive { which, index });
            }
        }
        Ok(Self { a, b, k, l })
    }

    /// All exponents equal to one.
    pub fn unit(a: usize, b: usize) -> Result<Self, ParamError> {
        Self::new(a, b, vec![1; a + b], vec![1; a + b])
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.a + self.b
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn l(&self) -> &[u32] {
        &self.l
    }

    /// Direction indices of the two products.
    pub fn groups(&self) -> [std::ops::Range<usize>; 2] {
        [0..self.a, self.a..self.a + self.b]
    }

    /// Sum of `k_i + l_i` over each group (the exponents of the scalar recurrence).
    pub fn group_weights(&self) -> [u32; 2] {
        self.groups()
            .map(|g| g.map(|i| self.k[i] + self.l[i]).sum())
    }

    /// Whether the gcd of all exponents is a power of two, `2^r`.
    pub fn gcd_condition(&self) -> GcdCondition {
        let g = self.k.iter().chain(&self.l).fold(0u32, |acc, &x| acc.gcd(&x));
        let r = g.is_power_of_two().then(|| g.trailing_zeros());
        GcdCondition {
            gcd: g,
            holds: r.is_some(),
            r,
        }
    }

    /// Exponent sums `(K1, L1, K2, L2)` of the two-dimensional reduction.
    pub fn reduce_to_2d(&self) -> Reduced2d {
        let [g1, g2] = self.groups();
        let sum = |v: &[u32], g: std::ops::Range<usize>| v[g].iter().sum::<u32>();
        Reduced2d {
            k1: sum(&self.k, g1.clone()),
            l1: sum(&self.l, g1),
            k2: sum(&self.k, g2.clone()),
            l2: sum(&self.l, g2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GcdCondition {
    pub gcd: u32,
    pub holds: bool,
    pub r: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Reduced2d {
    pub k1: u32,
    pub l1: u32,
    pub k2: u32,
    pub l2: u32,
}

impl Reduced2d {
    /// The reduced equation as a `(1,1)` instance of the recurrence.
    /// Fails when either group is empty (a zero exponent).
    pub fn to_params(&self) -> Result<TodaParams, ParamError> {
        TodaParams::new(1, 1, vec![self.k1, self.k2], vec![self.l1, self.l2])
    }
}
