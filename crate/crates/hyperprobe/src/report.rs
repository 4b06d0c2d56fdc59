//! The JSON verdict report and process exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hyperprobe_core::oracle::Transport;
use hyperprobe_core::Verdict;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{CampaignConfig, OracleSpec};

pub const SCHEMA: &str = "hyperprobe-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleInfo {
    pub spec: OracleSpec,
    pub id: String,
    pub transport: Transport,
    pub concurrent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub seed: u64,
    pub oracle: OracleInfo,
    /// The configuration that produced the report, without its output path.
    pub config: CampaignConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub verdict: Verdict,
    /// Suite-specific data; `null` when the suite could not run.
    pub result: Value,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictReport {
    pub schema: String,
    pub overall: Verdict,
    pub provenance: Provenance,
    /// Keyed by suite name.
    pub suites: BTreeMap<String, SuiteReport>,
    pub diagnostics: Vec<String>,
}

/// Pretty-printed JSON with every object's keys sorted, newline terminated.
pub fn to_canonical_json<T: Serialize>(v: &T) -> String {
    // Going through `Value` sorts keys: its map is ordered.
    let value = serde_json::to_value(v).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_report(text: &str) -> Result<VerdictReport, serde_json::Error> {
    serde_json::from_str(text)
}

pub const EXIT_CONSISTENT: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

pub const fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Consistent => EXIT_CONSISTENT,
        Verdict::Falsified => EXIT_FALSIFIED,
        Verdict::Incomplete => EXIT_INCOMPLETE,
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write report to {path}: {source}")]
pub struct EmitError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

/// Write the canonical report to `path`, or to standard output when `None`,
/// and return the exit code for its overall verdict.
pub fn emit_report(r: &VerdictReport, path: Option<&Path>) -> Result<i32, EmitError> {
    let text = to_canonical_json(r);
    match path {
        Some(p) => fs::write(p, text).map_err(|source| EmitError { path: p.to_path_buf(), source })?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| EmitError { path: "<stdout>".into(), source })?;
        }
    }
    Ok(exit_code(r.overall))
}
