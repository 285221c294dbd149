//! The report envelope.
//!
//! Only the header varies between identical runs; the payload is a pure
//! function of the run config. Keys follow struct declaration order.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;
use crate::exit::{CliError, Status};

pub const TOOL: &str = "toda-lp";

#[derive(Serialize)]
pub struct Header {
    pub generated_unix: u64,
}

#[derive(Serialize)]
pub struct Payload {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub status: Status,
    pub exit_code: i32,
    pub result: Value,
}

#[derive(Serialize)]
pub struct Report {
    pub header: Header,
    pub payload: Payload,
}

/// What a subcommand hands back: the resolved config, its result, a text
/// rendering and the exit status.
pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub text: String,
    pub status: Status,
}

impl Outcome {
    pub fn new<C: Serialize, R: Serialize>(
        command: &'static str,
        config: &C,
        result: &R,
        text: String,
        status: Status,
    ) -> Result<Self, CliError> {
        Ok(Outcome {
            command,
            config: to_json(config)?,
            result: to_json(result)?,
            text,
            status,
        })
    }

    pub fn into_report(self) -> (Report, String) {
        let generated_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let report = Report {
            header: Header { generated_unix },
            payload: Payload {
                tool: TOOL,
                version: toda_lp::VERSION,
                command: self.command,
                config: self.config,
                status: self.status,
                exit_code: self.status.code(),
                result: self.result,
            },
        };
        (report, self.text)
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::internal(e.to_string()))
}

/// Writes the report (JSON) or its text rendering to `output` or stdout.
pub fn emit(outcome: Outcome, format: Format, output: Option<&Path>) -> Result<Status, CliError> {
    let status = outcome.status;
    let (report, text) = outcome.into_report();
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = text;
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s.push_str(&format!("status: {:?} (exit {})\n", status, status.code()));
            s
        }
    };
    match output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::internal(e.to_string()))?,
    }
    Ok(status)
}
