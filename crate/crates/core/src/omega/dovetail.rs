use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use super::dyadic::Dyadic;
use super::machine::{exec_prefix, Prefix};

/// Stored next to every emitted bit string.
pub const CONVERGENCE_NOTE: &str = "Stage values are exact lower bounds for this toy machine only. No computable \
function bounds how far they are from the limit, so a later stage can change any of these bits.";

pub const BITS_STATUS: &str = "UNCERTIFIED";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaStage {
    pub stage: u32,
    /// Halting programs (as `0`/`1` strings) and their step counts.
    #[serde(skip)]
    pub halted: BTreeMap<String, u64>,
    pub halted_count: usize,
    pub lower_bound: Dyadic,
}

fn explore(prefix: &mut Vec<bool>, max_len: usize, fuel: u64, out: &mut BTreeMap<String, u64>) {
    match exec_prefix(prefix, fuel) {
        Prefix::Halted { steps } => {
            out.insert(prefix.iter().map(|&b| if b { '1' } else { '0' }).collect(), steps);
        }
        Prefix::NeedsBits if prefix.len() < max_len => {
            for b in [false, true] {
                prefix.push(b);
                explore(prefix, max_len, fuel, out);
                prefix.pop();
            }
        }
        Prefix::NeedsBits | Prefix::Diverges | Prefix::OutOfFuel => {}
    }
}

/// One stage: every program of at most `t` bits, `t` steps each.
pub fn stage(t: u32) -> OmegaStage {
    let mut halted = BTreeMap::new();
    explore(&mut Vec::new(), t as usize, u64::from(t), &mut halted);
    let lower_bound = halted.keys().fold(Dyadic::zero(), |acc, p| acc.add(&Dyadic::pow2_neg(p.len() as u32)));
    OmegaStage { stage: t, halted_count: halted.len(), halted, lower_bound }
}

/// Stages `1..=max_stage`.
pub fn dovetail(max_stage: u32) -> Vec<OmegaStage> {
    (1..=max_stage).map(stage).collect()
}

/// `t halted_count num/2^k`
pub fn stage_line(s: &OmegaStage) -> String {
    alloc::format!("{} {} {}", s.stage, s.halted_count, s.lower_bound)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmittedBits {
    pub stage: u32,
    pub bits: String,
    /// Always [`BITS_STATUS`].
    pub status: &'static str,
}

/// The first `count` binary digits of the last stage's lower bound.
pub fn emit_bits(stages: &[OmegaStage], count: u32) -> Option<EmittedBits> {
    let last = stages.last()?;
    Some(EmittedBits { stage: last.stage, bits: last.lower_bound.fraction_bits(count), status: BITS_STATUS })
}
