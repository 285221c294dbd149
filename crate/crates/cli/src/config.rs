//! Flag parsing and config-file merging.
//!
//! Every subcommand's flags double as the schema of its JSON config file.
//! Flags are all optional at parse time; after the file is overlaid the
//! result is resolved into a fully populated run config, which is what
//! reports embed.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use toda_lp::toda::TodaParams;

use crate::exit::CliError;

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct CommonArgs {
    /// JSON file whose keys mirror the long flags; flags take precedence.
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ParamArgs {
    /// Number of directions in the first product.
    #[arg(long)]
    pub a: Option<usize>,
    /// Number of directions in the second product.
    #[arg(long)]
    pub b: Option<usize>,
    /// Forward exponents, comma separated (a+b entries).
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    /// Backward exponents, comma separated (a+b entries).
    #[arg(long, value_delimiter = ',')]
    pub l: Option<Vec<u32>>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<TodaParams, CliError> {
        let a = self.a.ok_or_else(|| CliError::config("missing --a"))?;
        let b = self.b.ok_or_else(|| CliError::config("missing --b"))?;
        let k = self.k.clone().ok_or_else(|| CliError::config("missing --k"))?;
        let l = self.l.clone().ok_or_else(|| CliError::config("missing --l"))?;
        TodaParams::new(a, b, k, l).map_err(|e| CliError::config(format!("invalid parameters: {e}")))
    }
}

pub fn is_set(v: &Value) -> bool {
    !matches!(v, Value::Null | Value::Bool(false))
}

/// Overlays the flags onto the config file named by `common.config`.
pub fn merge<T>(flags: &T, config: Option<&Path>) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned + Default + Clone,
{
    let Some(path) = config else {
        return Ok(flags.clone());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    let mut base: Map<String, Value> = match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => m,
        Ok(_) => return Err(CliError::config("config file must hold a JSON object")),
        Err(e) => return Err(CliError::config(format!("config {}: {e}", path.display()))),
    };
    let known = to_object(&T::default())?;
    if let Some(key) = base.keys().find(|k| !known.contains_key(*k)) {
        return Err(CliError::config(format!("unknown key `{key}` in config {}", path.display())));
    }
    for (key, v) in to_object(flags)? {
        if is_set(&v) {
            base.insert(key, v);
        }
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| CliError::config(format!("config {}: {e}", path.display())))
}

fn to_object<T: Serialize>(v: &T) -> Result<Map<String, Value>, CliError> {
    match serde_json::to_value(v) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(CliError::internal("flags did not serialize to an object")),
        Err(e) => Err(CliError::internal(e.to_string())),
    }
}

/// Parses `VAR[:NEW]` style lists, splitting on commas outside brackets so
/// that names like `tau[0;1,-1]` survive.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Parses a lattice point written `x,y,z` (parentheses optional).
pub fn parse_point(s: &str) -> Result<Vec<i64>, CliError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::config(format!("bad lattice point `{s}`")))
}
