use clap::Args;
use serde::{Deserialize, Serialize};
use toda_lp::toda::{c_sequence, c_sequence_factored, FactoredCSequence, TodaParams};
use toda_lp::Rational;

use crate::config::{merge, CommonArgs, ParamArgs};
use crate::exit::{CliError, Status};
use crate::report::Outcome;

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CSequenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Positive integer c_0 [default: 1].
    #[arg(long)]
    pub c0: Option<u64>,
    /// Positive integer c_1 [default: 1].
    #[arg(long)]
    pub c1: Option<u64>,
    /// Last index [default: 6].
    #[arg(long)]
    pub tmax: Option<u32>,
    /// Stop exact iteration before a value would exceed this many decimal digits [default: 100000].
    #[arg(long)]
    pub max_digits: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CSequenceConfig {
    pub params: TodaParams,
    pub c0: u64,
    pub c1: u64,
    pub tmax: u32,
    pub max_digits: u64,
}

#[derive(Serialize)]
struct CSequenceResult {
    weights: [u32; 2],
    /// Values are exact; `p/q` marks a non-integer.
    values: Vec<String>,
    computed_up_to: u32,
    truncated: bool,
    all_integral: bool,
    strictly_increasing_from_2: bool,
    /// Estimated decimal digits of every value up to `tmax`.
    log10_estimates: Vec<f64>,
    /// Atom factorization, present for `c0 = c1 = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    factored: Option<FactoredCSequence>,
}

/// `log10 c_t` for `t <= t_max` by the recurrence in logarithms.
fn log10_estimates(params: &TodaParams, c0: u64, c1: u64, t_max: u32) -> Vec<f64> {
    let [w1, w2] = params.group_weights();
    let (hi, lo) = (w1.max(w2) as f64, w1.min(w2) as f64);
    let mut out = vec![(c0 as f64).log10()];
    if t_max >= 1 {
        out.push((c1 as f64).log10());
    }
    while out.len() <= t_max as usize {
        let n = out.len();
        let (prev, cur) = (out[n - 2], out[n - 1]);
        // log10(c^hi + c^lo) = hi*L + log10(1 + c^(lo-hi))
        let sum = hi * cur + (10f64.powf((lo - hi) * cur)).ln_1p() / std::f64::consts::LN_10;
        out.push(sum - prev);
    }
    out
}

pub fn run(args: &CSequenceArgs) -> Result<Outcome, CliError> {
    let args = merge(args, args.common.config.as_deref())?;
    let cfg = CSequenceConfig {
        params: args.params.resolve()?,
        c0: args.c0.unwrap_or(1),
        c1: args.c1.unwrap_or(1),
        tmax: args.tmax.unwrap_or(6),
        max_digits: args.max_digits.unwrap_or(100_000),
    };
    if cfg.c0 == 0 || cfg.c1 == 0 {
        return Err(CliError::config("--c0 and --c1 must be positive"));
    }
    let logs = log10_estimates(&cfg.params, cfg.c0, cfg.c1, cfg.tmax);
    let reachable = logs.iter().take_while(|&&l| l < cfg.max_digits as f64).count().max(1) as u32 - 1;
    let exact = c_sequence(
        &cfg.params,
        Rational::from_integer(cfg.c0.into()),
        Rational::from_integer(cfg.c1.into()),
        reachable,
    );
    let factored = (cfg.c0 == 1 && cfg.c1 == 1).then(|| c_sequence_factored(&cfg.params, cfg.tmax));
    let result = CSequenceResult {
        weights: cfg.params.group_weights(),
        values: exact.values.iter().map(|v| v.to_string()).collect(),
        computed_up_to: reachable,
        truncated: reachable < cfg.tmax,
        all_integral: exact.all_integral,
        strictly_increasing_from_2: exact.strictly_increasing_from_2,
        log10_estimates: logs,
        factored,
    };
    // Integrality and growth are only claimed for c0 = c1 = 1.
    let status = if cfg.c0 == 1 && cfg.c1 == 1 && !(result.all_integral && result.strictly_increasing_from_2) {
        Status::VerificationFailed
    } else {
        Status::Ok
    };
    let mut text = format!("c-sequence W=({}, {}):\n", result.weights[0], result.weights[1]);
    for (t, v) in result.values.iter().enumerate() {
        if v.len() > 60 {
            text.push_str(&format!("  c_{t} = <{} digits>\n", v.len()));
        } else {
            text.push_str(&format!("  c_{t} = {v}\n"));
        }
    }
    if result.truncated {
        text.push_str(&format!("  (stopped at t={reachable}; c_{} has about {:.0} digits)\n", reachable + 1, result.log10_estimates[reachable as usize + 1]));
    }
    text.push_str(&format!(
        "integral: {}\nstrictly increasing from t=2: {}\n",
        result.all_integral, result.strictly_increasing_from_2
    ));
    if let Some(f) = &result.factored {
        text.push_str(&format!(
            "factored certificate to t={}: integral {}, increasing {}\n",
            cfg.tmax, f.integral_certified, f.increasing_from_2_certified
        ));
    }
    Outcome::new("csequence", &cfg, &result, text, status)
}
