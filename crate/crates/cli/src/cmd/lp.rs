use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use toda_lp::laurent::{parse, serialize};
use toda_lp::lp::{
    build_toda_seed, cluster_expansions, lemma_check, mu_infinity_check, mutate_sequence, parse_seed, LemmaReport,
    MuInfinityReport, MutationError, MutationRecordReport, MutationStep, Seed, SeedReport, TodaSeedError,
    DEFAULT_HAT_BOUND,
};
use toda_lp::toda::{LatticePoint, TodaParams};
use toda_lp::{LaurentPoly, VarId, VarTable};

use crate::config::{merge, parse_point, split_top_level, CommonArgs, ParamArgs};
use crate::exit::{CliError, Status};
use crate::report::Outcome;

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct LpArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonArgs,
    /// Seed file (`var = polynomial` lines, optional `frozen:` line).
    #[arg(long, value_name = "FILE", conflicts_with = "toda")]
    pub seed: Option<PathBuf>,
    /// Use the lattice seed of the recurrence given by --a --b --k --l.
    #[arg(long)]
    pub toda: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Window radius of the lattice seed [default: 3].
    #[arg(long)]
    pub radius: Option<i64>,
    /// Mutations to apply in order: VAR or VAR:NEW, comma separated.
    #[arg(long)]
    pub mutate: Option<String>,
    #[arg(long, value_enum)]
    pub verify: Option<Verify>,
    /// Shuffle the mutation order of mu-infinity with this seed (scan order if absent).
    #[arg(long)]
    pub order_seed: Option<u64>,
    /// Lemma mutation points relative to the center, e.g. m+e1,m-e2.
    #[arg(long)]
    pub subset: Option<String>,
    /// Center m of the verification, e.g. 0,0 [default: origin].
    #[arg(long)]
    pub center: Option<String>,
    /// Report every new variable as a Laurent polynomial in the initial cluster.
    #[arg(long)]
    pub expansions: bool,
    /// Bound on the exponent search when computing exchange Laurent polynomials [default: 64].
    #[arg(long)]
    pub hat_bound: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verify {
    MuInfinity,
    Lemma,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SeedSource {
    File { path: PathBuf },
    Toda { params: TodaParams, radius: i64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct LpConfig {
    pub source: SeedSource,
    pub mutate: Vec<String>,
    pub verify: Option<Verify>,
    pub order_seed: Option<u64>,
    pub subset: Vec<String>,
    pub center: Option<Vec<i64>>,
    pub expansions: bool,
    pub hat_bound: u32,
}

#[derive(Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
enum Verification {
    MuInfinity(MuInfinityReport),
    Lemma(LemmaReport),
}

#[derive(Serialize)]
struct LpResult {
    initial: SeedReport,
    mutations: Vec<MutationRecordReport>,
    #[serde(rename = "final")]
    final_seed: SeedReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    expansions: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Verification>,
}

fn resolve(args: &LpArgs) -> Result<LpConfig, CliError> {
    let args = merge(args, args.common.config.as_deref())?;
    let source = match (&args.seed, args.toda) {
        (Some(path), false) => SeedSource::File { path: path.clone() },
        (None, true) => SeedSource::Toda {
            params: args.params.resolve()?,
            radius: args.radius.unwrap_or(3),
        },
        (Some(_), true) => return Err(CliError::config("--seed and --toda are mutually exclusive")),
        (None, false) => return Err(CliError::config("one of --seed FILE or --toda is required")),
    };
    if args.verify.is_some() && !matches!(source, SeedSource::Toda { .. }) {
        return Err(CliError::config("--verify needs the lattice seed (--toda)"));
    }
    if args.subset.is_some() && args.verify != Some(Verify::Lemma) {
        return Err(CliError::config("--subset only applies to --verify lemma"));
    }
    Ok(LpConfig {
        source,
        mutate: args.mutate.as_deref().map(split_top_level).unwrap_or_default(),
        verify: args.verify,
        order_seed: args.order_seed,
        subset: args.subset.as_deref().map(split_top_level).unwrap_or_default(),
        center: args.center.as_deref().map(parse_point).transpose()?,
        expansions: args.expansions,
        hat_bound: args.hat_bound.unwrap_or(DEFAULT_HAT_BOUND),
    })
}

/// `m`, `m+e2`, `m-e1`, or an absolute point `1,0`.
fn parse_offset(s: &str, m: &LatticePoint) -> Result<LatticePoint, CliError> {
    let bad = || CliError::config(format!("bad subset point `{s}`; expected m, m+eI, m-eI or x,y,..."));
    let Some(rest) = s.strip_prefix('m') else {
        return Ok(LatticePoint(parse_point(s)?));
    };
    if rest.is_empty() {
        return Ok(m.clone());
    }
    let (sign, axis) = match rest.split_at(1) {
        ("+", a) => (1, a),
        ("-", a) => (-1, a),
        _ => return Err(bad()),
    };
    let i: usize = axis.strip_prefix('e').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
    if i == 0 || i > m.dim() {
        return Err(bad());
    }
    Ok(m.shifted(i - 1, sign))
}

fn variable(name: &str, table: &mut VarTable) -> Result<VarId, CliError> {
    let not_var = || CliError::config(format!("`{name}` is not a variable name"));
    let p = parse(name, table).map_err(|_| not_var())?;
    match p.vars().into_iter().collect::<Vec<_>>()[..] {
        [v] if p == LaurentPoly::var(v) => Ok(v),
        _ => Err(not_var()),
    }
}

fn mutation_status(e: &MutationError) -> Status {
    match e {
        MutationError::Sequence { source, .. } => mutation_status(source),
        MutationError::NoSuchEntry(_) | MutationError::NotClusterVariable(_) | MutationError::NameInUse(_) => {
            Status::ConfigError
        }
        MutationError::NotLaurent(_) => Status::LaurentViolation,
        _ => Status::Internal,
    }
}

fn lp_error(e: TodaSeedError) -> CliError {
    let status = match &e {
        TodaSeedError::RadiusTooSmall(_) | TodaSeedError::CenterTooClose { .. } => Status::ConfigError,
        TodaSeedError::Mutation(m) => mutation_status(m),
        TodaSeedError::Step(s) => Status::of_step_error(s),
    };
    CliError {
        status,
        message: e.to_string(),
    }
}

pub fn run(args: &LpArgs) -> Result<Outcome, CliError> {
    let cfg = resolve(args)?;
    let mut table = VarTable::new();
    let initial: Seed = match &cfg.source {
        SeedSource::File { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read seed {}: {e}", path.display())))?;
            parse_seed(&text, &mut table).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        }
        SeedSource::Toda { params, radius } => build_toda_seed(params, *radius, &mut table).map_err(lp_error)?.seed,
    };

    let mut steps = Vec::new();
    for item in &cfg.mutate {
        let (var, new_name) = match item.rsplit_once(':') {
            Some((v, n)) if !n.contains(']') => (v, Some(n.trim().to_string())),
            _ => (item.as_str(), None),
        };
        steps.push(MutationStep {
            var: variable(var.trim(), &mut table)?,
            new_name,
        });
    }
    let (final_seed, log) = mutate_sequence(&initial, &steps, &mut table, cfg.hat_bound).map_err(|e| CliError {
        status: mutation_status(&e),
        message: format!("mutation failed: {e}"),
    })?;

    let expansions = if cfg.expansions {
        let map = cluster_expansions(&log).map_err(|e| CliError {
            status: mutation_status(&e),
            message: format!("expansion failed: {e}"),
        })?;
        Some(
            map.iter()
                .map(|(&v, p)| (serialize(&LaurentPoly::var(v), &table), serialize(p, &table)))
                .collect(),
        )
    } else {
        None
    };

    let mut status = Status::Ok;
    let verification = match (&cfg.source, cfg.verify) {
        (SeedSource::Toda { params, radius }, Some(kind)) => {
            let m = LatticePoint(cfg.center.clone().unwrap_or_else(|| vec![0; params.dim()]));
            if m.dim() != params.dim() {
                return Err(CliError::config(format!("--center needs {} coordinates", params.dim())));
            }
            let v = match kind {
                Verify::MuInfinity => {
                    Verification::MuInfinity(mu_infinity_check(params, *radius, &m, cfg.order_seed, &mut table).map_err(lp_error)?)
                }
                Verify::Lemma => {
                    let order = cfg.subset.iter().map(|s| parse_offset(s, &m)).collect::<Result<Vec<_>, _>>()?;
                    Verification::Lemma(lemma_check(params, *radius, &m, &order, &mut table).map_err(lp_error)?)
                }
            };
            let passed = match &v {
                Verification::MuInfinity(r) => r.passed,
                Verification::Lemma(r) => r.equal,
            };
            if !passed {
                status = Status::VerificationFailed;
            }
            Some(v)
        }
        _ => None,
    };

    // A bare verification run leaves the seed untouched; skip the (long) listing.
    let mut text = if cfg.mutate.is_empty() && verification.is_some() {
        String::new()
    } else {
        final_seed.to_text(&table)
    };
    if let Some(map) = &expansions {
        for (v, p) in map {
            text.push_str(&format!("# {v} = {p}\n"));
        }
    }
    match &verification {
        Some(Verification::MuInfinity(r)) => text.push_str(&format!(
            "mu-infinity at m={} ({} mutations): {}\n",
            r.center,
            r.mutations,
            if r.passed { "pass" } else { "FAIL" }
        )),
        Some(Verification::Lemma(r)) => text.push_str(&format!(
            "lemma at m={}: {}\n  engine:  {}\n  formula: {}\n",
            r.center,
            if r.equal { "match" } else { "MISMATCH" },
            r.engine,
            r.formula
        )),
        None => {}
    }
    let result = LpResult {
        initial: initial.to_report(&table),
        mutations: log.to_report(&table),
        final_seed: final_seed.to_report(&table),
        expansions,
        verification,
    };
    Outcome::new("lp", &cfg, &result, text, status)
}
