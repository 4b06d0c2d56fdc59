use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::cnf::verify_assignment;
use super::dimacs::to_dimacs;
use super::planted::{generate_planted, Ratio};
use crate::blackbox::TranscriptLog;
use crate::oracle::{Answer, Oracle, OracleHandle, Query, QueryOutcome, SatAnswer};
use crate::seed::derive_seed;

/// Stored with every campaign.
pub const AVERAGE_CASE_NOTE: &str = "Instances are drawn at random from one generator family, so these \
timings describe typical behaviour on that family only. They say nothing about worst-case complexity.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorConfig {
    /// Planted 3-SAT, see [`generate_planted`].
    #[serde(rename = "planted-3sat")]
    Planted { ratio: Ratio },
}

impl GeneratorConfig {
    pub fn family_id(&self) -> &'static str {
        match self {
            GeneratorConfig::Planted { .. } => "planted-3sat",
        }
    }
}

/// What the oracle said about one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    Sat,
    Unsat,
    Unknown,
    TimedOut,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub size: u32,
    pub seed: u64,
    /// `None` for a censored sample: no answer within the budget.
    pub ticks: Option<u64>,
    pub claim: Claim,
    /// Only decided for claims that come with an assignment.
    pub correct: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Sample {
    pub fn is_censored(&self) -> bool {
        self.ticks.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingCampaign {
    pub family_id: String,
    pub oracle_id: String,
    pub generator: GeneratorConfig,
    pub seed: u64,
    pub reps: u32,
    pub sizes: Vec<u32>,
    pub samples: Vec<Sample>,
    pub average_case_note: String,
}

impl TimingCampaign {
    pub fn censored(&self) -> usize {
        self.samples.iter().filter(|s| s.is_censored()).count()
    }

    /// Samples whose claimed assignment failed verification.
    pub fn wrong_answers(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.correct == Some(false))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CampaignError {
    #[error("no sizes given")]
    NoSizes,
    #[error("sizes must be positive and strictly increasing")]
    BadSizes,
    #[error("reps must be at least 1")]
    NoReps,
}

/// For every size, generate `reps` instances, put each to the oracle and
/// check any returned assignment. Timeouts become censored samples.
pub fn run_campaign<O: Oracle>(
    handle: &mut OracleHandle<O>,
    sizes: &[u32],
    reps: u32,
    generator: &GeneratorConfig,
    seed: u64,
    log: &mut TranscriptLog,
) -> Result<TimingCampaign, CampaignError> {
    if sizes.is_empty() {
        return Err(CampaignError::NoSizes);
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CampaignError::BadSizes);
    }
    if reps == 0 {
        return Err(CampaignError::NoReps);
    }
    let mut samples = Vec::with_capacity(sizes.len() * reps as usize);
    let mut index = 0u64;
    for &n in sizes {
        for _ in 0..reps {
            let inst_seed = derive_seed(seed, "sat", index);
            index += 1;
            let (formula, _hidden) = match generator {
                GeneratorConfig::Planted { ratio } => generate_planted(n, *ratio, inst_seed),
            };
            let label = alloc::format!("sat:{}:n={n}:seed={inst_seed}", generator.family_id());
            let outcome = handle.ask(&Query::Sat { dimacs: to_dimacs(&formula) });
            log.record_outcome(&label, &outcome);
            let sample = match outcome {
                QueryOutcome::Answered(r) => {
                    let (claim, correct, error) = match r.answer {
                        Answer::Sat(SatAnswer::Satisfiable(a)) => match verify_assignment(&formula, &a) {
                            Ok(ok) => (Claim::Sat, Some(ok), None),
                            Err(e) => (Claim::Sat, Some(false), Some(e.to_string())),
                        },
                        Answer::Sat(SatAnswer::Unsatisfiable) => (Claim::Unsat, None, None),
                        Answer::Sat(SatAnswer::Unknown) => (Claim::Unknown, None, None),
                        other => (
                            Claim::Failed,
                            None,
                            Some(alloc::format!("answer of the wrong kind: {}", other.task())),
                        ),
                    };
                    let ticks = if claim == Claim::Failed { None } else { Some(r.ticks) };
                    Sample { size: n, seed: inst_seed, ticks, claim, correct, error }
                }
                QueryOutcome::TimedOut { budget } => Sample {
                    size: n,
                    seed: inst_seed,
                    ticks: None,
                    claim: Claim::TimedOut,
                    correct: None,
                    error: Some(alloc::format!("no answer within {budget} ticks")),
                },
                QueryOutcome::Failed(e) => Sample {
                    size: n,
                    seed: inst_seed,
                    ticks: None,
                    claim: Claim::Failed,
                    correct: None,
                    error: Some(e.to_string()),
                },
            };
            samples.push(sample);
        }
    }
    Ok(TimingCampaign {
        family_id: generator.family_id().into(),
        oracle_id: handle.id().into(),
        generator: generator.clone(),
        seed,
        reps,
        sizes: sizes.to_vec(),
        samples,
        average_case_note: AVERAGE_CASE_NOTE.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{BruteForceSat, LiarSat, NeverAnswers};

    fn planted() -> GeneratorConfig {
        GeneratorConfig::Planted { ratio: Ratio::new(21, 5) }
    }

    #[test]
    fn brute_force_all_correct() {
        let mut h = OracleHandle::new(BruteForceSat::new(), u64::MAX);
        let mut log = TranscriptLog::new("bf", 1);
        let c = run_campaign(&mut h, &[8, 10, 12], 3, &planted(), 1, &mut log).unwrap();
        assert_eq!(c.samples.len(), 9);
        assert!(c.samples.iter().all(|s| s.correct == Some(true) && !s.is_censored()));
        assert_eq!(log.records.len(), 9);
    }

    #[test]
    fn liar_is_caught() {
        let mut h = OracleHandle::new(LiarSat::new(), u64::MAX);
        let mut log = TranscriptLog::new("liar", 1);
        let c = run_campaign(&mut h, &[6, 8], 2, &planted(), 1, &mut log).unwrap();
        assert!(c.wrong_answers().count() > 0);
    }

    #[test]
    fn all_timeouts_censored() {
        let mut h = OracleHandle::new(NeverAnswers::new(), 100);
        let mut log = TranscriptLog::new("never", 1);
        let c = run_campaign(&mut h, &[4, 5, 6], 2, &planted(), 1, &mut log).unwrap();
        assert_eq!(c.censored(), 6);
        assert_eq!(log.timeouts.len(), 6);
        assert!(matches!(crate::sat::fit_poly_degree(&c, 3), crate::sat::FitOutcome::InsufficientData { .. }));
    }

    #[test]
    fn argument_checks() {
        let mut h = OracleHandle::new(BruteForceSat::new(), 10);
        let mut log = TranscriptLog::default();
        assert_eq!(run_campaign(&mut h, &[], 1, &planted(), 0, &mut log), Err(CampaignError::NoSizes));
        assert_eq!(run_campaign(&mut h, &[4, 4], 1, &planted(), 0, &mut log), Err(CampaignError::BadSizes));
        assert_eq!(run_campaign(&mut h, &[0, 4], 1, &planted(), 0, &mut log), Err(CampaignError::BadSizes));
        assert_eq!(run_campaign(&mut h, &[4], 0, &planted(), 0, &mut log), Err(CampaignError::NoReps));
    }

    #[test]
    fn same_seed_same_campaign() {
        let run = || {
            let mut h = OracleHandle::new(BruteForceSat::new(), u64::MAX);
            run_campaign(&mut h, &[5, 7], 2, &planted(), 42, &mut TranscriptLog::default()).unwrap()
        };
        assert_eq!(run(), run());
    }
}
