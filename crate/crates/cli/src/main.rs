//! `toda-lp`: run lattice evolutions, Laurent phenomenon mutations and the
//! associated checks, and write reproducible JSON reports.

mod cmd;
mod config;
mod exit;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{merge, CommonArgs};
use crate::exit::{CliError, EXIT_CODE_HELP};
use crate::report::{emit, Outcome};

#[derive(Parser)]
#[command(name = "toda-lp", version, about, after_help = EXIT_CODE_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the recurrence on a finite window and run checks.
    #[command(after_help = EXIT_CODE_HELP)]
    Evolve(cmd::evolve::EvolveArgs),
    /// The spatially homogeneous scalar sequence.
    #[command(after_help = EXIT_CODE_HELP)]
    Csequence(cmd::csequence::CSequenceArgs),
    /// Mutate a seed, or verify the lattice seed against the recurrence.
    #[command(after_help = EXIT_CODE_HELP)]
    Lp(cmd::lp::LpArgs),
    /// Check the reduction to two dimensions on class-constant data.
    #[command(after_help = EXIT_CODE_HELP)]
    Reduce(cmd::reduce::ReduceArgs),
    /// Whether the gcd of all exponents is a power of two.
    #[command(after_help = EXIT_CODE_HELP)]
    GcdCondition(cmd::reduce::GcdArgs),
}

/// Output options after overlaying the config file.
fn output_options<T>(args: &T, common: &CommonArgs) -> Result<CommonArgs, CliError>
where
    T: serde::Serialize + serde::de::DeserializeOwned + Default + Clone + HasCommon,
{
    Ok(merge(args, common.config.as_deref())?.common().clone())
}

trait HasCommon {
    fn common(&self) -> &CommonArgs;
}

macro_rules! has_common {
    ($($t:ty),*) => {
        $(impl HasCommon for $t {
            fn common(&self) -> &CommonArgs {
                &self.common
            }
        })*
    };
}

has_common!(
    cmd::evolve::EvolveArgs,
    cmd::csequence::CSequenceArgs,
    cmd::lp::LpArgs,
    cmd::reduce::ReduceArgs,
    cmd::reduce::GcdArgs
);

fn dispatch(command: &Command) -> Result<(Outcome, CommonArgs), CliError> {
    Ok(match command {
        Command::Evolve(a) => (cmd::evolve::run(a)?, output_options(a, &a.common)?),
        Command::Csequence(a) => (cmd::csequence::run(a)?, output_options(a, &a.common)?),
        Command::Lp(a) => (cmd::lp::run(a)?, output_options(a, &a.common)?),
        Command::Reduce(a) => (cmd::reduce::run(a)?, output_options(a, &a.common)?),
        Command::GcdCondition(a) => (cmd::reduce::run_gcd(a)?, output_options(a, &a.common)?),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("TODA_LP_LOG")).init();
    let cli = Cli::parse();
    let status = dispatch(&cli.command).and_then(|(outcome, common)| {
        emit(outcome, common.format.unwrap_or_default(), common.output.as_deref())
    });
    match status {
        Ok(s) => ExitCode::from(s.code() as u8),
        Err(e) => {
            eprintln!("toda-lp: {}", e.message);
            ExitCode::from(e.status.code() as u8)
        }
    }
}
