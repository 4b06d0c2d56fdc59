use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::detect::{check_certificate, LoopDetector, NonHaltingCertificate};
use super::run::{run, RunError, RunResult};
use super::{format, TuringMachine};
use crate::blackbox::{
    falsify, Certificate, FalsifyReport, Instance, Membership, TestItem, TestSet, TestSetError, TranscriptLog,
};
use crate::oracle::{Answer, Oracle, OracleHandle, Query};

/// "Does `machine` halt on `input`?"
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltingInstance {
    pub name: String,
    pub machine: TuringMachine,
    pub input: String,
}

impl HaltingInstance {
    pub fn new(name: impl Into<String>, machine: TuringMachine, input: impl Into<String>) -> Result<Self, RunError> {
        let input = input.into();
        if let Some(c) = input.chars().find(|c| !machine.input_alphabet().contains(c)) {
            return Err(RunError::InputSymbol(c));
        }
        Ok(Self { name: name.into(), machine, input })
    }
}

impl Serialize for HaltingInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HaltingInstance", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("machine", &format::to_text(&self.machine))?;
        st.serialize_field("input", &self.input)?;
        st.end()
    }
}

impl Instance for HaltingInstance {
    fn label(&self) -> String {
        alloc::format!("halting:{}", self.name)
    }

    fn to_query(&self) -> Query {
        Query::Halting { machine: format::to_text(&self.machine), input: self.input.clone() }
    }

    fn membership(answer: &Answer) -> Option<Membership> {
        match answer {
            Answer::Halts(true) => Some(Membership::InX),
            Answer::Halts(false) => Some(Membership::NotInX),
            _ => None,
        }
    }
}

/// Ground truth evidence for a halting item. The halting side is a
/// simulation trace summary (step count and final tape); the non-halting side
/// is a configuration-repetition certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum HaltingCertificate {
    Halted { steps: u64, output: String },
    NonHalting { certificate: NonHaltingCertificate },
}

impl HaltingCertificate {
    pub fn size(&self) -> u64 {
        match self {
            HaltingCertificate::Halted { steps, .. } => *steps,
            HaltingCertificate::NonHalting { certificate } => certificate.size(),
        }
    }
}

impl Certificate<HaltingInstance> for HaltingCertificate {
    fn check(&self, inst: &HaltingInstance, claimed: Membership) -> bool {
        match (self, claimed) {
            (HaltingCertificate::Halted { steps, output }, Membership::InX) => matches!(
                run(&inst.machine, &inst.input, *steps),
                Ok(RunResult::Halted { steps: s, output: ref o, .. }) if s == *steps && o == output
            ),
            (HaltingCertificate::NonHalting { certificate }, Membership::NotInX) => {
                check_certificate(&inst.machine, &inst.input, certificate)
            }
            _ => false,
        }
    }
}

pub type HaltingTestSet = TestSet<HaltingInstance, HaltingCertificate>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "classification", rename_all = "kebab-case")]
pub enum Classification {
    Halts { steps: u64, output: String, rejected: bool },
    NonHalting { certificate: NonHaltingCertificate },
    /// Neither halted nor certified within the fuel.
    Uncertified { fuel: u64 },
}

/// Run, then look for a loop, both within `fuel` steps.
pub fn certify(tm: &TuringMachine, input: &str, fuel: u64, detector: LoopDetector) -> Result<Classification, RunError> {
    if let RunResult::Halted { steps, output, rejected } = run(tm, input, fuel)? {
        return Ok(Classification::Halts { steps, output, rejected });
    }
    Ok(match detector.detect(tm, input, fuel)? {
        Some(certificate) => Classification::NonHalting { certificate },
        None => Classification::Uncertified { fuel },
    })
}

#[derive(Debug, Clone)]
pub struct BuiltTestSet {
    pub set: HaltingTestSet,
    /// Names of machines that could not be certified either way.
    pub excluded: Vec<String>,
}

/// Classify every machine and keep the certified ones. Fails rather than
/// returning a set that lacks halting or non-halting members.
pub fn build_test_set(
    machines: &[HaltingInstance],
    fuel: u64,
    detector: LoopDetector,
) -> Result<BuiltTestSet, TestSetError> {
    let mut items = Vec::new();
    let mut excluded = Vec::new();
    for inst in machines {
        let class = certify(&inst.machine, &inst.input, fuel, detector)
            .expect("instance inputs are validated on construction");
        let (truth, certificate) = match class {
            Classification::Halts { steps, output, .. } => {
                (Membership::InX, HaltingCertificate::Halted { steps, output })
            }
            Classification::NonHalting { certificate } => {
                (Membership::NotInX, HaltingCertificate::NonHalting { certificate })
            }
            Classification::Uncertified { .. } => {
                excluded.push(inst.name.clone());
                continue;
            }
        };
        let certificate_size = certificate.size();
        items.push(TestItem { instance: inst.clone(), truth, certificate, certificate_size });
    }
    Ok(BuiltTestSet { set: TestSet::new(items)?, excluded })
}

/// Attached to every halting evaluation.
pub const CORRELATION_NOTE: &str = "Descriptive only. A computable decision procedure spends time that grows with \
the size of the certificates it effectively constructs; an oracle whose time does not track certificate size \
behaves unlike a computable proof system, which is an observation and not a verdict.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaltingEvaluation {
    pub falsify: FalsifyReport,
    /// Spearman correlation of oracle ticks against certificate size.
    pub rank_correlation: Option<f64>,
    pub note: String,
}

/// Falsification run plus the time-vs-certificate-size statistic.
pub fn evaluate_halting_oracle<O: Oracle>(
    handle: &mut OracleHandle<O>,
    set: &HaltingTestSet,
    log: &mut TranscriptLog,
) -> HaltingEvaluation {
    let report = falsify(handle, set, log);
    HaltingEvaluation {
        rank_correlation: report.stats.time_certificate_correlation,
        falsify: report,
        note: CORRELATION_NOTE.to_string(),
    }
}
