use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};
use toda_lp::toda::{
    coprimeness_matrix, degree_growth, init_all_ones, init_numeric, init_symbolic, line_image_evolution,
    random_rational_layers, CoprimenessReport, DegreeGrowth, Evolution, LatticeState, LineImage, StepError,
    StepOptions, TodaParams, DEFAULT_PAIR_TERM_BUDGET,
};
use toda_lp::{LatticeValue, Rational, Scalar, VarTable};

use crate::config::{merge, CommonArgs, ParamArgs};
use crate::exit::{CliError, Status};
use crate::report::Outcome;

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Half-width R of the initial window [-R, R]^d [default: 3].
    #[arg(long)]
    pub radius: Option<i64>,
    /// Last time layer to compute [default: 4].
    #[arg(long)]
    pub tmax: Option<u32>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Initial data for the numeric modes.
    #[arg(long, value_enum)]
    pub init: Option<Init>,
    /// Checks to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub check: Option<Vec<Check>>,
    /// Stop once a product or a layer would exceed this many terms.
    #[arg(long)]
    pub term_budget: Option<usize>,
    /// Skip coprimeness pairs whose combined term count exceeds this [default: 20000].
    #[arg(long)]
    pub pair_budget: Option<usize>,
    /// Only compute the light cone of the window center at t_max.
    #[arg(long)]
    pub center_focus: bool,
    /// Seed for random initial data [default: 0].
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Include every computed value in the report.
    #[arg(long)]
    pub emit_values: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Laurent polynomials in the initial variables.
    #[default]
    Symbolic,
    /// Exact rationals.
    Rational,
    Float,
    /// Random images on a line over a prime field; a necessary Laurent check.
    Line,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Init {
    #[default]
    Random,
    Ones,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Laurent,
    Coprime,
    Degree,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvolveConfig {
    pub params: TodaParams,
    pub radius: i64,
    pub tmax: u32,
    pub mode: Mode,
    pub init: Init,
    pub checks: Vec<Check>,
    pub term_budget: Option<usize>,
    pub pair_budget: usize,
    pub center_focus: bool,
    pub rng_seed: u64,
    pub emit_values: bool,
}

impl EvolveArgs {
    pub fn resolve(&self) -> Result<EvolveConfig, CliError> {
        let args = merge(self, self.common.config.as_deref())?;
        let mut checks = args.check.clone().unwrap_or_default();
        checks.sort();
        checks.dedup();
        let cfg = EvolveConfig {
            params: args.params.resolve()?,
            radius: args.radius.unwrap_or(3),
            tmax: args.tmax.unwrap_or(4),
            mode: args.mode.unwrap_or_default(),
            init: args.init.unwrap_or_default(),
            checks,
            term_budget: args.term_budget,
            pair_budget: args.pair_budget.unwrap_or(DEFAULT_PAIR_TERM_BUDGET),
            center_focus: args.center_focus,
            rng_seed: args.rng_seed.unwrap_or(0),
            emit_values: args.emit_values,
        };
        if cfg.radius < 1 {
            return Err(CliError::config("--radius must be at least 1"));
        }
        for c in &cfg.checks {
            let ok = match c {
                Check::Laurent => matches!(cfg.mode, Mode::Symbolic | Mode::Line),
                Check::Coprime | Check::Degree => cfg.mode == Mode::Symbolic,
            };
            if !ok {
                return Err(CliError::config(format!("check {c:?} is not available in {:?} mode", cfg.mode)));
            }
        }
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct StepSummary {
    t: u32,
    region: i64,
    divisions_ok: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_span: Option<i64>,
}

#[derive(Serialize)]
struct CheckResult {
    check: Check,
    passed: bool,
    note: String,
}

#[derive(Serialize)]
struct EvolveResult {
    reached_t: u32,
    completed: bool,
    halted: Option<StepError>,
    divisions_ok: usize,
    steps: Vec<StepSummary>,
    checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coprimeness: Option<CoprimenessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<DegreeGrowth>,
    /// Layer -> point -> value, in the laurent text grammar for symbolic runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<BTreeMap<u32, BTreeMap<String, String>>>,
}

fn summarize<S>(ev: &Evolution<S>, emit: bool, show: impl Fn(&S) -> String) -> EvolveResult {
    let steps = ev
        .steps
        .iter()
        .map(|s| StepSummary {
            t: s.t,
            region: s.region,
            divisions_ok: s.divisions_ok,
            max_terms: s.degree_stats.iter().map(|p| p.stats.term_count()).max(),
            max_span: s.degree_stats.iter().filter_map(|p| p.stats.span()).max(),
        })
        .collect();
    let values = emit.then(|| {
        ev.layers
            .iter()
            .map(|l| (l.t, l.values.iter().map(|(p, v)| (p.to_string(), show(v))).collect()))
            .collect()
    });
    EvolveResult {
        reached_t: ev.reached_t(),
        completed: ev.halted.is_none(),
        halted: ev.halted.clone(),
        divisions_ok: ev.divisions_ok(),
        steps,
        checks: Vec::new(),
        coprimeness: None,
        degree: None,
        values,
    }
}

fn numeric_start<S: Scalar + LatticeValue>(cfg: &EvolveConfig, cast: impl Fn(&Rational) -> S) -> LatticeState<S> {
    match cfg.init {
        Init::Ones => init_all_ones(&cfg.params, cfg.radius),
        Init::Random => {
            let [l0, l1] = random_rational_layers(&cfg.params, cfg.radius, cfg.rng_seed);
            let conv = |m: BTreeMap<_, Rational>| m.into_iter().map(|(p, v)| (p, cast(&v))).collect();
            init_numeric(&cfg.params, cfg.radius, &conv(l0), &conv(l1)).expect("random data covers the window")
        }
    }
}

fn line_show(v: &LineImage) -> String {
    match (v.min_degree(), v.max_degree()) {
        (Some(lo), Some(hi)) => format!("s^{lo}..s^{hi}"),
        _ => "0".into(),
    }
}

pub fn run(args: &EvolveArgs) -> Result<Outcome, CliError> {
    let cfg = args.resolve()?;
    let opts = StepOptions {
        term_budget: cfg.term_budget,
        center_target: cfg.center_focus.then_some(cfg.tmax),
    };
    info!("evolve {:?} mode, R={}, t_max={}", cfg.mode, cfg.radius, cfg.tmax);
    let mut status = Status::Ok;
    let mut result = match cfg.mode {
        Mode::Symbolic => {
            let mut table = VarTable::new();
            let ev = init_symbolic(&cfg.params, cfg.radius, &mut table).evolve_with(cfg.tmax, opts);
            let mut r = summarize(&ev, cfg.emit_values, |v| toda_lp::laurent::serialize(v, &table));
            if cfg.checks.contains(&Check::Coprime) {
                let rep = coprimeness_matrix(&ev.layers, cfg.pair_budget);
                let passed = rep.all_units();
                r.checks.push(CheckResult {
                    check: Check::Coprime,
                    passed,
                    note: format!(
                        "{} pairs: {} units, {} non-units, {} skipped",
                        rep.pairs, rep.units, rep.nonunits, rep.skipped
                    ),
                });
                if !passed {
                    status = status.worst(Status::CoprimenessFailure);
                }
                r.coprimeness = Some(rep);
            }
            if cfg.checks.contains(&Check::Degree) {
                match degree_growth(&ev.layers) {
                    Ok(g) => {
                        r.checks.push(CheckResult {
                            check: Check::Degree,
                            passed: true,
                            note: format!("entropy estimate {:.4}", g.entropy_estimate),
                        });
                        r.degree = Some(g);
                    }
                    Err(e) => {
                        r.checks.push(CheckResult {
                            check: Check::Degree,
                            passed: false,
                            note: e.to_string(),
                        });
                        status = status.worst(Status::VerificationFailed);
                    }
                }
            }
            r
        }
        Mode::Rational => {
            let ev = numeric_start::<Rational>(&cfg, Rational::clone).evolve_with(cfg.tmax, opts);
            summarize(&ev, cfg.emit_values, |v| v.to_string())
        }
        Mode::Float => {
            let ev = numeric_start::<f64>(&cfg, Scalar::to_f64).evolve_with(cfg.tmax, opts);
            summarize(&ev, cfg.emit_values, |v| format!("{v:e}"))
        }
        Mode::Line => {
            let ev = line_image_evolution(&cfg.params, cfg.radius, cfg.tmax, cfg.rng_seed);
            summarize(&ev, cfg.emit_values, line_show)
        }
    };
    if cfg.checks.contains(&Check::Laurent) {
        let violated = result.halted.as_ref().is_some_and(StepError::is_violation);
        let note = match cfg.mode {
            Mode::Line => format!("{} exact divisions of line images (necessary condition)", result.divisions_ok),
            _ => format!("{} exact divisions", result.divisions_ok),
        };
        result.checks.insert(
            0,
            CheckResult {
                check: Check::Laurent,
                passed: !violated,
                note,
            },
        );
    }
    if let Some(e) = &result.halted {
        status = status.worst(Status::of_step_error(e));
    }
    let text = render(&cfg, &result);
    Outcome::new("evolve", &cfg, &result, text, status)
}

fn render(cfg: &EvolveConfig, r: &EvolveResult) -> String {
    let mut out = format!(
        "evolve a={} b={} k={:?} l={:?} R={} mode={:?}: reached t={} of {}\n",
        cfg.params.a(),
        cfg.params.b(),
        cfg.params.k(),
        cfg.params.l(),
        cfg.radius,
        cfg.mode,
        r.reached_t,
        cfg.tmax
    );
    if let Some(e) = &r.halted {
        out.push_str(&format!("halted: {e}\n"));
    }
    for s in &r.steps {
        out.push_str(&format!("  t={} region={} divisions={}", s.t, s.region, s.divisions_ok));
        if let (Some(terms), Some(span)) = (s.max_terms, s.max_span) {
            out.push_str(&format!(" max_terms={terms} max_span={span}"));
        }
        out.push('\n');
    }
    for c in &r.checks {
        out.push_str(&format!("{:?}: {} ({})\n", c.check, if c.passed { "pass" } else { "FAIL" }, c.note));
    }
    out
}
