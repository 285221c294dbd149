use serde::Serialize;
use thiserror::Error;
use toda_lp::toda::StepError;

/// Process exit codes. Part of the public interface; listed in `--help`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok = 0,
    Internal = 1,
    ConfigError = 2,
    LaurentViolation = 3,
    CoprimenessFailure = 4,
    WindowExhausted = 5,
    BudgetReached = 6,
    VerificationFailed = 7,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Status for an evolution that halted early.
    pub fn of_step_error(e: &StepError) -> Self {
        match e {
            StepError::LaurentViolation { .. } | StepError::SingularValue { .. } => Status::LaurentViolation,
            StepError::WindowExhausted { .. } => Status::WindowExhausted,
            StepError::BudgetExceeded { .. } => Status::BudgetReached,
        }
    }

    /// The more severe of two outcomes; lower nonzero codes win.
    pub fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::Ok, s) | (s, Status::Ok) => s,
            (a, b) => a.min(b),
        }
    }
}

pub const EXIT_CODE_HELP: &str = "\
Exit codes:
  0  success, every requested check passed
  1  internal or I/O error
  2  configuration error (bad or missing flags, unreadable files)
  3  Laurent violation or division by zero
  4  coprimeness failure (a non-unit gcd between iterates)
  5  window exhausted before t_max
  6  term budget reached before t_max
  7  verification failed (mu-infinity, lemma, reduction or c-sequence)

Set TODA_LP_LOG (e.g. TODA_LP_LOG=debug) to control log verbosity.";

/// A failure that prevents a report from being produced.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            status: Status::ConfigError,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Internal,
            message: message.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_prefers_the_lower_failure_code() {
        assert_eq!(Status::Ok.worst(Status::Ok), Status::Ok);
        assert_eq!(Status::Ok.worst(Status::BudgetReached), Status::BudgetReached);
        assert_eq!(Status::BudgetReached.worst(Status::LaurentViolation), Status::LaurentViolation);
        assert_eq!(Status::CoprimenessFailure.worst(Status::WindowExhausted), Status::CoprimenessFailure);
    }
}
