//! Campaign runner for `hyperprobe`: the parts that need an operating
//! system.
//!
//! [`config`] reads TOML campaign files, [`wire`] talks to oracles running as
//! subprocesses, [`corpus`] loads the Turing machine corpus, [`campaign`]
//! dispatches the suites and [`report`] writes the canonical JSON report.

pub mod campaign;
pub mod config;
pub mod corpus;
pub mod report;
pub mod wire;

pub use campaign::run_config;
pub use config::{CampaignConfig, OracleSpec, Overrides, SuiteName};
pub use report::{emit_report, exit_code, VerdictReport};
