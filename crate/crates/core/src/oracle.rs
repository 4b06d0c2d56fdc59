//! The black-box boundary: what a device under test is asked and what it
//! answers.
//!
//! In-process oracles implement [`Oracle`] directly. The `hyperprobe` crate
//! implements it for external processes speaking the line-delimited JSON wire
//! protocol, so every suite treats both kinds identically.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::gni::{Graph, GraphChoice};
use crate::sat::Assignment;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Halting,
    Gni,
    Sat,
    Bits,
}

impl Task {
    pub const fn as_str(self) -> &'static str {
        match self {
            Task::Halting => "halting",
            Task::Gni => "gni",
            Task::Sat => "sat",
            Task::Bits => "bits",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One question put to an oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", content = "payload", rename_all = "lowercase")]
pub enum Query {
    /// Does `machine` (in the plain-text machine format) halt on `input`?
    Halting { machine: String, input: String },
    /// Which of the public pair `(g1, g2)` was `h` derived from?
    Gni { pair_id: String, g1: Graph, g2: Graph, h: Graph },
    /// Solve a DIMACS CNF formula.
    Sat { dimacs: String },
    /// Produce `count` bits.
    Bits { count: usize },
}

impl Query {
    pub fn task(&self) -> Task {
        match self {
            Query::Halting { .. } => Task::Halting,
            Query::Gni { .. } => Task::Gni,
            Query::Sat { .. } => Task::Sat,
            Query::Bits { .. } => Task::Bits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SatAnswer {
    Satisfiable(Assignment),
    Unsatisfiable,
    /// The oracle declined to decide.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    /// `true` means the machine halts.
    Halts(bool),
    Gni(GraphChoice),
    Sat(SatAnswer),
    /// ASCII `'0'`/`'1'` characters.
    Bits(String),
}

impl Answer {
    pub fn task(&self) -> Task {
        match self {
            Answer::Halts(_) => Task::Halting,
            Answer::Gni(_) => Task::Gni,
            Answer::Sat(_) => Task::Sat,
            Answer::Bits(_) => Task::Bits,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Halts(true) => f.write_str("halts"),
            Answer::Halts(false) => f.write_str("does-not-halt"),
            Answer::Gni(c) => write!(f, "{}", c.index()),
            Answer::Sat(SatAnswer::Satisfiable(a)) => write!(f, "sat {a}"),
            Answer::Sat(SatAnswer::Unsatisfiable) => f.write_str("unsat"),
            Answer::Sat(SatAnswer::Unknown) => f.write_str("unknown"),
            Answer::Bits(b) => f.write_str(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub answer: Answer,
    /// Observed time. In-process oracles report a deterministic step count;
    /// external oracles report quantized wall-clock ticks.
    pub ticks: u64,
    /// Step count claimed by the oracle itself, if any.
    pub reported_steps: Option<u64>,
}

impl Response {
    pub fn stepped(answer: Answer, steps: u64) -> Self {
        Self { answer, ticks: steps, reported_steps: Some(steps) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "snake_case")]
pub enum OracleError {
    #[error("no answer within the tick budget")]
    Timeout,
    #[error("oracle does not handle task {0}")]
    Unsupported(Task),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("protocol error: {0}")]
    Protocol(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transport {
    InProcess,
    ExternalProcess,
}

/// A device under test.
pub trait Oracle {
    fn id(&self) -> &str;

    fn transport(&self) -> Transport {
        Transport::InProcess
    }

    /// Whether several queries may be in flight at once.
    fn concurrent(&self) -> bool {
        false
    }

    /// Answer `query`. `budget_ticks` is the handle's timeout; oracles may use
    /// it to stop early and return [`OracleError::Timeout`].
    fn query(&mut self, query: &Query, budget_ticks: u64) -> Result<Response, OracleError>;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn id(&self) -> &str {
        (**self).id()
    }
    fn transport(&self) -> Transport {
        (**self).transport()
    }
    fn concurrent(&self) -> bool {
        (**self).concurrent()
    }
    fn query(&mut self, query: &Query, budget_ticks: u64) -> Result<Response, OracleError> {
        (**self).query(query, budget_ticks)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn id(&self) -> &str {
        (**self).id()
    }
    fn transport(&self) -> Transport {
        (**self).transport()
    }
    fn concurrent(&self) -> bool {
        (**self).concurrent()
    }
    fn query(&mut self, query: &Query, budget_ticks: u64) -> Result<Response, OracleError> {
        (**self).query(query, budget_ticks)
    }
}

/// What happened to one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryOutcome {
    Answered(Response),
    /// No answer within `budget` ticks. Recorded, never dropped.
    TimedOut { budget: u64 },
    Failed(OracleError),
}

/// An oracle together with its timeout.
#[derive(Debug)]
pub struct OracleHandle<O> {
    oracle: O,
    timeout_ticks: u64,
}

impl<O: Oracle> OracleHandle<O> {
    pub fn new(oracle: O, timeout_ticks: u64) -> Self {
        Self { oracle, timeout_ticks }
    }

    pub fn timeout_ticks(&self) -> u64 {
        self.timeout_ticks
    }

    pub fn id(&self) -> &str {
        self.oracle.id()
    }

    pub fn transport(&self) -> Transport {
        self.oracle.transport()
    }

    pub fn oracle_mut(&mut self) -> &mut O {
        &mut self.oracle
    }

    pub fn into_inner(self) -> O {
        self.oracle
    }

    /// Ask one question. An answer that arrives after the budget counts as a
    /// timeout.
    pub fn ask(&mut self, query: &Query) -> QueryOutcome {
        match self.oracle.query(query, self.timeout_ticks) {
            Ok(r) if r.ticks > self.timeout_ticks => QueryOutcome::TimedOut { budget: self.timeout_ticks },
            Ok(r) => QueryOutcome::Answered(r),
            Err(OracleError::Timeout) => QueryOutcome::TimedOut { budget: self.timeout_ticks },
            Err(e) => QueryOutcome::Failed(e),
        }
    }
}
