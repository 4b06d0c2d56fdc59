//! The black-box model: observed `(input, output, time)` triples, their
//! projections, polynomial time bounds, and falsification against finite test
//! sets with certified ground truth.
//!
//! A transcript only ever supports statements about the inputs that were
//! actually queried. Whether the device computes a non-computable function
//! cannot be settled from finitely many observations, so there is no
//! operation for it; the strongest outcome is [`Verdict::Falsified`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::oracle::{Answer, Oracle, OracleError, OracleHandle, Query, QueryOutcome};
use crate::stats;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlackBoxError {
    #[error("record input must be non-empty")]
    EmptyInput,
    #[error("max norm of an empty tuple is undefined")]
    EmptyTuple,
}

/// One observation `(x, y, z)`: input, output and discrete time.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlackBoxRecord {
    pub input: String,
    pub output: String,
    pub time: u64,
}

impl BlackBoxRecord {
    pub fn new(input: impl Into<String>, output: impl Into<String>, time: u64) -> Result<Self, BlackBoxError> {
        let input = input.into();
        if input.is_empty() {
            return Err(BlackBoxError::EmptyInput);
        }
        Ok(Self { input, output: output.into(), time })
    }
}

/// A query that produced no answer in time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeoutRecord {
    pub input: String,
    pub budget: u64,
}

/// A query whose transport or protocol failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub input: String,
    pub error: OracleError,
}

/// Everything observed from one oracle during a campaign.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TranscriptLog {
    pub oracle_id: String,
    pub seed: u64,
    pub records: Vec<BlackBoxRecord>,
    pub timeouts: Vec<TimeoutRecord>,
    pub failures: Vec<FailureRecord>,
}

impl TranscriptLog {
    pub fn new(oracle_id: impl Into<String>, seed: u64) -> Self {
        Self { oracle_id: oracle_id.into(), seed, ..Self::default() }
    }

    pub fn push(&mut self, record: BlackBoxRecord) {
        self.records.push(record);
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty() && self.timeouts.is_empty() && self.failures.is_empty()
    }

    /// Append another log's observations, keeping their order.
    pub fn extend(&mut self, other: TranscriptLog) {
        self.records.extend(other.records);
        self.timeouts.extend(other.timeouts);
        self.failures.extend(other.failures);
    }

    /// Every input that was put to the oracle, answered or not.
    pub fn queried_inputs(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .map(|r| r.input.as_str())
            .chain(self.timeouts.iter().map(|t| t.input.as_str()))
            .chain(self.failures.iter().map(|f| f.input.as_str()))
            .collect()
    }

    /// Record the outcome of one query under `input`.
    pub fn record_outcome(&mut self, input: &str, outcome: &QueryOutcome) {
        match outcome {
            QueryOutcome::Answered(r) => self.records.push(BlackBoxRecord {
                input: input.to_string(),
                output: r.answer.to_string(),
                time: r.ticks,
            }),
            QueryOutcome::TimedOut { budget } => {
                self.timeouts.push(TimeoutRecord { input: input.to_string(), budget: *budget })
            }
            QueryOutcome::Failed(e) => {
                self.failures.push(FailureRecord { input: input.to_string(), error: e.clone() })
            }
        }
    }
}

/// The input-output relation `{(x, y) | (x, y, z) observed}`.
pub fn project_io(log: &TranscriptLog) -> BTreeSet<(String, String)> {
    log.records.iter().map(|r| (r.input.clone(), r.output.clone())).collect()
}

/// The computing-time relation `{(x, z) | (x, y, z) observed}`.
pub fn project_time(log: &TranscriptLog) -> BTreeSet<(String, u64)> {
    log.records.iter().map(|r| (r.input.clone(), r.time)).collect()
}

fn is_function<V: Ord>(rel: &BTreeSet<(String, V)>) -> bool {
    let mut seen = BTreeSet::new();
    rel.iter().all(|(x, _)| seen.insert(x))
}

/// True iff both projections are functions of the input.
pub fn is_deterministic(log: &TranscriptLog) -> bool {
    is_function(&project_io(log)) && is_function(&project_time(log))
}

/// `|x| = max x_i`.
pub fn max_norm(x: &[u64]) -> Result<u64, BlackBoxError> {
    x.iter().copied().max().ok_or(BlackBoxError::EmptyTuple)
}

/// A polynomial over the naturals with non-negative coefficients;
/// `coefficients[i]` multiplies `n^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    coefficients: Vec<u64>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<u64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0);
        }
        Self { coefficients }
    }

    /// `c * n^d`.
    pub fn monomial(c: u64, d: usize) -> Self {
        let mut v = alloc::vec![0; d + 1];
        v[d] = c;
        Self::new(v)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation, saturating at `u128::MAX`.
    pub fn eval(&self, n: u64) -> u128 {
        self.coefficients
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc.saturating_mul(u128::from(n)).saturating_add(u128::from(c)))
    }
}

/// Polynomials with non-negative coefficients up to a maximum degree.
/// Every member is monotone on the naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundClass {
    pub max_degree: usize,
}

impl BoundClass {
    pub fn contains(&self, p: &Polynomial) -> bool {
        p.degree() <= self.max_degree
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundVerdict {
    /// Every sampled record satisfies `time <= h(size)`. Says nothing about
    /// unsampled inputs.
    Consistent,
    Violated { witness: BlackBoxRecord, size: u64, bound: u128 },
}

/// Check `t_B(x) <= h(|x|)` on the logged records, in log order.
pub fn check_bound(log: &TranscriptLog, h: &Polynomial, size_of: impl Fn(&str) -> u64) -> BoundVerdict {
    for r in &log.records {
        let size = size_of(&r.input);
        let bound = h.eval(size);
        if u128::from(r.time) > bound {
            return BoundVerdict::Violated { witness: r.clone(), size, bound };
        }
    }
    BoundVerdict::Consistent
}

/// The only verdicts the harness ever issues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// At least one answer contradicts certified ground truth.
    Falsified,
    /// No contradiction on the finite sample.
    Consistent,
    /// Some queries went unanswered and nothing was contradicted.
    Incomplete,
}

impl Verdict {
    pub const fn as_str(self) -> &'static str {
        match self {
            Verdict::Falsified => "FALSIFIED",
            Verdict::Consistent => "CONSISTENT",
            Verdict::Incomplete => "INCOMPLETE",
        }
    }

    /// Combine suite verdicts: any falsification wins, then incompleteness.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Consistent;
        for v in verdicts {
            match v {
                Verdict::Falsified => return Verdict::Falsified,
                Verdict::Incomplete => out = Verdict::Incomplete,
                Verdict::Consistent => {}
            }
        }
        out
    }
}

/// Ground truth of a test item with respect to the problem's set `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    InX,
    NotInX,
}

/// A problem instance that can be put to an oracle.
pub trait Instance {
    fn label(&self) -> String;
    fn to_query(&self) -> Query;
    /// Interpret an answer; `None` if it is not an answer to this kind of
    /// problem.
    fn membership(answer: &Answer) -> Option<Membership>;
}

/// A machine-checkable proof that an instance has the claimed membership.
pub trait Certificate<I> {
    fn check(&self, instance: &I, claimed: Membership) -> bool;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestItem<I, C> {
    pub instance: I,
    pub truth: Membership,
    pub certificate: C,
    pub certificate_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TestSetError {
    #[error("test set has no certified member of X")]
    NoMembers,
    #[error("test set has no certified non-member of X")]
    NoNonMembers,
    #[error("certificate for {0} does not check")]
    BadCertificate(String),
}

/// A finite set `Y` with `Y ∩ X ≠ ∅` and `Y ∩ X^c ≠ ∅`, each item carrying
/// a checked certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestSet<I, C> {
    items: Vec<TestItem<I, C>>,
}

impl<I: Instance, C: Certificate<I>> TestSet<I, C> {
    pub fn new(items: Vec<TestItem<I, C>>) -> Result<Self, TestSetError> {
        if !items.iter().any(|i| i.truth == Membership::InX) {
            return Err(TestSetError::NoMembers);
        }
        if !items.iter().any(|i| i.truth == Membership::NotInX) {
            return Err(TestSetError::NoNonMembers);
        }
        if let Some(bad) = items.iter().find(|i| !i.certificate.check(&i.instance, i.truth)) {
            return Err(TestSetError::BadCertificate(bad.instance.label()));
        }
        Ok(Self { items })
    }
}

impl<I, C> TestSet<I, C> {
    pub fn items(&self) -> &[TestItem<I, C>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ItemStatus {
    Agrees,
    Contradicts,
    Unanswered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemOutcome {
    pub label: String,
    pub truth: Membership,
    pub answer: Option<Membership>,
    pub ticks: Option<u64>,
    pub certificate_size: u64,
    pub status: ItemStatus,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyStats {
    pub answered: usize,
    pub total_ticks: u64,
    /// Spearman correlation between oracle time and certificate size over
    /// answered items. `None` when undefined (fewer than two answers).
    pub time_certificate_correlation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub verdict: Verdict,
    pub items: Vec<ItemOutcome>,
    pub stats: FalsifyStats,
}

impl FalsifyReport {
    pub fn counterexamples(&self) -> impl Iterator<Item = &ItemOutcome> {
        self.items.iter().filter(|i| i.status == ItemStatus::Contradicts)
    }

    pub fn unanswered(&self) -> impl Iterator<Item = &ItemOutcome> {
        self.items.iter().filter(|i| i.status == ItemStatus::Unanswered)
    }
}

/// Time-vs-certificate rank correlation; constant series give 0.
pub(crate) fn correlation(ticks: &[f64], sizes: &[f64]) -> Option<f64> {
    if ticks.len() < 2 {
        return None;
    }
    Some(stats::spearman(ticks, sizes).unwrap_or(0.0))
}

/// Query every item of `set` and compare against ground truth.
///
/// One contradicted item is enough for [`Verdict::Falsified`]. Timeouts and
/// transport failures are kept as unanswered items and block
/// [`Verdict::Consistent`].
pub fn falsify<O, I, C>(handle: &mut OracleHandle<O>, set: &TestSet<I, C>, log: &mut TranscriptLog) -> FalsifyReport
where
    O: Oracle,
    I: Instance,
{
    let mut items = Vec::with_capacity(set.len());
    for item in set.items() {
        let label = item.instance.label();
        let outcome = handle.ask(&item.instance.to_query());
        log.record_outcome(&label, &outcome);
        let (answer, ticks, status, diagnostic) = match &outcome {
            QueryOutcome::Answered(r) => match I::membership(&r.answer) {
                Some(m) if m == item.truth => (Some(m), Some(r.ticks), ItemStatus::Agrees, None),
                Some(m) => (Some(m), Some(r.ticks), ItemStatus::Contradicts, None),
                None => (
                    None,
                    Some(r.ticks),
                    ItemStatus::Unanswered,
                    Some(alloc::format!("answer of the wrong kind: {}", r.answer.task())),
                ),
            },
            QueryOutcome::TimedOut { budget } => {
                (None, None, ItemStatus::Unanswered, Some(alloc::format!("timed out after {budget} ticks")))
            }
            QueryOutcome::Failed(e) => (None, None, ItemStatus::Unanswered, Some(e.to_string())),
        };
        items.push(ItemOutcome {
            label,
            truth: item.truth,
            answer,
            ticks,
            certificate_size: item.certificate_size,
            status,
            diagnostic,
        });
    }

    let answered: Vec<&ItemOutcome> = items.iter().filter(|i| i.answer.is_some()).collect();
    let t: Vec<f64> = answered.iter().map(|i| i.ticks.unwrap_or(0) as f64).collect();
    let s: Vec<f64> = answered.iter().map(|i| i.certificate_size as f64).collect();
    let stats = FalsifyStats {
        answered: answered.len(),
        total_ticks: answered.iter().filter_map(|i| i.ticks).sum(),
        time_certificate_correlation: correlation(&t, &s),
    };

    let verdict = if items.iter().any(|i| i.status == ItemStatus::Contradicts) {
        Verdict::Falsified
    } else if items.iter().any(|i| i.status == ItemStatus::Unanswered) {
        Verdict::Incomplete
    } else {
        Verdict::Consistent
    };
    FalsifyReport { verdict, items, stats }
}

/// Group records by input, for cross-query inspection.
pub fn records_by_input(log: &TranscriptLog) -> BTreeMap<&str, Vec<&BlackBoxRecord>> {
    let mut m: BTreeMap<&str, Vec<&BlackBoxRecord>> = BTreeMap::new();
    for r in &log.records {
        m.entry(r.input.as_str()).or_default().push(r);
    }
    m
}
