use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::{apply_permutation, Graph, Permutation};
use crate::oracle::{Answer, Oracle, OracleHandle, Query, QueryOutcome};
use crate::seed;

/// Which of the two public graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum GraphChoice {
    First,
    Second,
}

impl GraphChoice {
    pub const fn index(self) -> u8 {
        match self {
            GraphChoice::First => 1,
            GraphChoice::Second => 2,
        }
    }
}

impl TryFrom<u8> for GraphChoice {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        match v {
            1 => Ok(GraphChoice::First),
            2 => Ok(GraphChoice::Second),
            other => Err(alloc::format!("graph choice must be 1 or 2, got {other}")),
        }
    }
}

impl From<GraphChoice> for u8 {
    fn from(c: GraphChoice) -> u8 {
        c.index()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GniPair {
    pub id: String,
    pub g1: Graph,
    pub g2: Graph,
}

impl GniPair {
    pub fn new(id: impl Into<String>, g1: Graph, g2: Graph) -> Self {
        Self { id: id.into(), g1, g2 }
    }

    pub fn graph(&self, c: GraphChoice) -> &Graph {
        match c {
            GraphChoice::First => &self.g1,
            GraphChoice::Second => &self.g2,
        }
    }

    /// Different vertex or edge counts settle the question without any
    /// protocol.
    pub fn trivially_non_isomorphic(&self) -> bool {
        self.g1.n() != self.g2.n() || self.g1.edge_count() != self.g2.edge_count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub coin: GraphChoice,
    pub h: Graph,
    pub answer: GraphChoice,
    pub correct: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProtocolVerdict {
    Accept,
    Reject,
    /// The prover failed to answer some round (timeout or transport failure).
    Incomplete,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub pair_id: String,
    pub n_rounds: u32,
    pub seed: u64,
    /// Rounds actually played. Fewer than `n_rounds` after an early reject or
    /// a failed round.
    pub rounds: Vec<Round>,
    pub verdict: ProtocolVerdict,
    /// Why the run is incomplete, when it is.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ProtocolTranscript {
    pub fn correct_rounds(&self) -> usize {
        self.rounds.iter().filter(|r| r.correct).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GniError {
    #[error("graphs have {0} and {1} vertices; the protocol needs equal sizes")]
    SizeMismatch(usize, usize),
    #[error("at least one round is required")]
    NoRounds,
}

/// Play up to `rounds` challenge rounds against `prover`. The run stops at the
/// first wrong answer. Same `seed`, same prover behaviour, same transcript.
pub fn run_gni_protocol<O: Oracle>(
    pair: &GniPair,
    prover: &mut OracleHandle<O>,
    rounds: u32,
    seed: u64,
) -> Result<ProtocolTranscript, GniError> {
    if pair.g1.n() != pair.g2.n() {
        return Err(GniError::SizeMismatch(pair.g1.n(), pair.g2.n()));
    }
    if rounds == 0 {
        return Err(GniError::NoRounds);
    }
    let n = pair.g1.n();
    let mut rng = seed::rng(seed);
    let mut played = Vec::new();
    let mut verdict = ProtocolVerdict::Accept;
    let mut failure = None;
    for _ in 0..rounds {
        let coin = if rng.gen::<bool>() { GraphChoice::First } else { GraphChoice::Second };
        let mut mapping: Vec<u32> = (0..n as u32).collect();
        mapping.shuffle(&mut rng);
        let p = Permutation::new(mapping).expect("a shuffle is a bijection");
        let h = apply_permutation(pair.graph(coin), &p).expect("sizes checked above");
        let query = Query::Gni { pair_id: pair.id.clone(), g1: pair.g1.clone(), g2: pair.g2.clone(), h: h.clone() };
        let answer = match prover.ask(&query) {
            QueryOutcome::Answered(r) => match r.answer {
                Answer::Gni(c) => c,
                other => {
                    verdict = ProtocolVerdict::Incomplete;
                    failure = Some(alloc::format!("prover answered a gni question with `{other}`"));
                    break;
                }
            },
            QueryOutcome::TimedOut { budget } => {
                verdict = ProtocolVerdict::Incomplete;
                failure = Some(alloc::format!("no answer within {budget} ticks"));
                break;
            }
            QueryOutcome::Failed(e) => {
                verdict = ProtocolVerdict::Incomplete;
                failure = Some(alloc::format!("{e}"));
                break;
            }
        };
        let correct = answer == coin;
        played.push(Round { coin, h, answer, correct });
        if !correct {
            verdict = ProtocolVerdict::Reject;
            break;
        }
    }
    Ok(ProtocolTranscript { pair_id: pair.id.clone(), n_rounds: rounds, seed, rounds: played, verdict, failure })
}
