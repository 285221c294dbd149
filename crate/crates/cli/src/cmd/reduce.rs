use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use toda_lp::toda::{
    class_data, reduction_consistency, reduction_consistency_symbolic, GcdCondition, LatticePoint, Reduced2d,
    ReductionError, ReductionReport, TodaParams,
};
use toda_lp::{Rational, VarTable};

use crate::config::{merge, parse_point, CommonArgs, ParamArgs};
use crate::exit::{CliError, Status};
use crate::report::Outcome;

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ReduceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Window radius of the full system [default: 3].
    #[arg(long)]
    pub radius: Option<i64>,
    /// Last time layer compared [default: 3].
    #[arg(long)]
    pub tmax: Option<u32>,
    /// JSON initial data `{"layer0": {"x,y,..": "p/q", ..}, "layer1": {..}}`;
    /// points left out take the value 1. Without it the classes get fresh variables.
    #[arg(long, value_name = "FILE")]
    pub initial: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReduceConfig {
    pub params: TodaParams,
    pub radius: i64,
    pub tmax: u32,
    pub initial: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialFile {
    #[serde(default)]
    layer0: BTreeMap<String, String>,
    #[serde(default)]
    layer1: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct ReduceResult {
    /// `(K1, K2)` and `(L1, L2)` of the reduced equation.
    k: [u32; 2],
    l: [u32; 2],
    report: ReductionReport,
}

type ClassValues = BTreeMap<LatticePoint, Rational>;

fn load_initial(params: &TodaParams, path: &PathBuf) -> Result<[ClassValues; 2], CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read initial data {}: {e}", path.display())))?;
    let file: InitialFile =
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("initial data {}: {e}", path.display())))?;
    let mut out = [BTreeMap::new(), BTreeMap::new()];
    for (layer, raw) in [&file.layer0, &file.layer1].into_iter().enumerate() {
        let mut points = BTreeMap::new();
        for (p, v) in raw {
            let point = LatticePoint(parse_point(p)?);
            if point.dim() != params.dim() {
                return Err(CliError::config(format!("initial point {p} needs {} coordinates", params.dim())));
            }
            let value: Rational = v
                .trim()
                .parse()
                .map_err(|_| CliError::config(format!("initial value `{v}` at {p} is not a rational")))?;
            if value == Rational::from_integer(0.into()) {
                return Err(CliError::config(format!("initial value at {p} is zero")));
            }
            points.insert(point, value);
        }
        out[layer] = class_data(params, layer as u32, &points).map_err(reduction_error)?;
    }
    Ok(out)
}

fn reduction_error(e: ReductionError) -> CliError {
    let status = match &e {
        ReductionError::DegenerateGroups(_) | ReductionError::NotClassConstant { .. } => Status::ConfigError,
        ReductionError::Full(s) | ReductionError::Reduced(s) => Status::of_step_error(s),
    };
    CliError {
        status,
        message: e.to_string(),
    }
}

pub fn run(args: &ReduceArgs) -> Result<Outcome, CliError> {
    let args = merge(args, args.common.config.as_deref())?;
    let cfg = ReduceConfig {
        params: args.params.resolve()?,
        radius: args.radius.unwrap_or(3),
        tmax: args.tmax.unwrap_or(3),
        initial: args.initial.clone(),
    };
    let report = match &cfg.initial {
        Some(path) => {
            let [c0, c1] = load_initial(&cfg.params, path)?;
            let one = Rational::from_integer(1.into());
            let at = |m: &ClassValues, c: &LatticePoint| m.get(c).cloned().unwrap_or_else(|| one.clone());
            reduction_consistency(&cfg.params, cfg.radius, cfg.tmax, |c| at(&c0, c), |c| at(&c1, c))
        }
        None => reduction_consistency_symbolic(&cfg.params, cfg.radius, cfg.tmax, &mut VarTable::new()),
    }
    .map_err(reduction_error)?;
    let r = report.reduced;
    let result = ReduceResult {
        k: [r.k1, r.k2],
        l: [r.l1, r.l2],
        report,
    };
    let status = if result.report.consistent {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    let text = format!(
        "reduced to K=({}, {}), L=({}, {})\ncompared {} values up to t={}: {}\n",
        r.k1,
        r.k2,
        r.l1,
        r.l2,
        result.report.compared,
        cfg.tmax,
        if result.report.consistent {
            "consistent".to_string()
        } else {
            format!("{} mismatches", result.report.mismatches.len())
        }
    );
    Outcome::new("reduce", &cfg, &result, text, status)
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct GcdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
}

#[derive(Serialize)]
struct GcdResult {
    #[serde(flatten)]
    condition: GcdCondition,
    reduced: Reduced2d,
}

pub fn run_gcd(args: &GcdArgs) -> Result<Outcome, CliError> {
    let args = merge(args, args.common.config.as_deref())?;
    let params = args.params.resolve()?;
    let result = GcdResult {
        condition: params.gcd_condition(),
        reduced: params.reduce_to_2d(),
    };
    let c = result.condition;
    let text = match c.r {
        Some(r) => format!("gcd of exponents = {} = 2^{r}: condition holds\n", c.gcd),
        None => format!("gcd of exponents = {}: not a power of two\n", c.gcd),
    };
    #[derive(Serialize)]
    struct Config<'a> {
        params: &'a TodaParams,
    }
    Outcome::new("gcd-condition", &Config { params: &params }, &result, text, Status::Ok)
}
