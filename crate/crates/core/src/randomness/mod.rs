//! Stochasticity tests for bit streams.
//!
//! Frequency, runs, block chi-square and Borel normality give PASS or FAIL at
//! a significance level. The LZ78 compression ratio is descriptive only: a
//! ratio near 1 is not evidence of incompressibility.

mod checks;
mod lz78;
mod special;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use checks::{block_test, borel_normality_test, compression_proxy, frequency_test, runs_test};
pub use lz78::lz78_bits;
pub use special::igamc;

use crate::seed::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BitStreamError {
    #[error("empty bit stream")]
    Empty,
    #[error("unexpected character {0:?} at offset {1}")]
    BadChar(char, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitStream {
    pub source_id: String,
    pub bits: Vec<bool>,
}

impl BitStream {
    pub fn new(source_id: impl Into<String>, bits: Vec<bool>) -> Result<Self, BitStreamError> {
        if bits.is_empty() {
            return Err(BitStreamError::Empty);
        }
        Ok(Self { source_id: source_id.into(), bits })
    }

    /// ASCII `0`/`1`, whitespace ignored.
    pub fn from_ascii(source_id: impl Into<String>, text: &str) -> Result<Self, BitStreamError> {
        let bits = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitStreamError::BadChar(other, i)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source_id, bits)
    }

    /// Raw bytes, most significant bit first.
    pub fn from_bytes(source_id: impl Into<String>, bytes: &[u8]) -> Result<Self, BitStreamError> {
        Self::new(source_id, bytes.iter().flat_map(|&b| (0..8).rev().map(move |i| b >> i & 1 == 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_ascii(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// `n` bits of SplitMix64 output, each word least significant bit first. A
/// calibration fixture, not a source of randomness claims.
pub fn reference_stream(seed: u64, n: usize) -> Vec<bool> {
    let mut g = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w = g.next_u64();
        out.extend((0..64).map(|i| w >> i & 1 == 1));
    }
    out.truncate(n);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TestVerdict {
    Pass,
    Fail,
    /// Too few bits for the test to mean anything; no verdict.
    InsufficientLength,
    /// A measurement without a verdict.
    Descriptive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestEntry {
    pub test: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    /// Bound the statistic was compared against, for tests without a
    /// p-value.
    pub threshold: Option<f64>,
    pub verdict: TestVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl TestEntry {
    pub(crate) fn insufficient(test: &str, needed: usize, got: usize) -> Self {
        Self {
            test: test.into(),
            statistic: None,
            p_value: None,
            threshold: None,
            verdict: TestVerdict::InsufficientLength,
            detail: Some(alloc::format!("needs at least {needed} bits, got {got}")),
        }
    }

    pub(crate) fn from_p(test: &str, statistic: f64, p: f64, alpha: f64) -> Self {
        Self {
            test: test.into(),
            statistic: Some(statistic),
            p_value: Some(p),
            threshold: Some(alpha),
            verdict: if p >= alpha { TestVerdict::Pass } else { TestVerdict::Fail },
            detail: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub alpha: f64,
    pub block_len: u32,
    pub max_block: u32,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self { alpha: 0.01, block_len: 3, max_block: 4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BatterySummary {
    pub pass: usize,
    pub fail: usize,
    pub insufficient_length: usize,
    pub descriptive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticityReport {
    pub source_id: String,
    pub length: usize,
    pub alpha: f64,
    pub entries: Vec<TestEntry>,
    pub summary: BatterySummary,
}

impl StochasticityReport {
    pub fn any_fail(&self) -> bool {
        self.summary.fail > 0
    }
}

pub fn run_battery(s: &BitStream, cfg: &BatteryConfig) -> StochasticityReport {
    let entries = alloc::vec![
        frequency_test(&s.bits, cfg.alpha),
        runs_test(&s.bits, cfg.alpha),
        block_test(&s.bits, cfg.block_len, cfg.alpha),
        borel_normality_test(&s.bits, cfg.max_block),
        compression_proxy(&s.bits),
    ];
    let mut summary = BatterySummary::default();
    for e in &entries {
        match e.verdict {
            TestVerdict::Pass => summary.pass += 1,
            TestVerdict::Fail => summary.fail += 1,
            TestVerdict::InsufficientLength => summary.insufficient_length += 1,
            TestVerdict::Descriptive => summary.descriptive += 1,
        }
    }
    StochasticityReport { source_id: s.source_id.clone(), length: s.len(), alpha: cfg.alpha, entries, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream_frozen_prefix() {
        let b: Vec<u8> = reference_stream(1, 16).into_iter().map(u8::from).collect();
        assert_eq!(b, [1, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0]);
        assert_eq!(reference_stream(1, 100).len(), 100);
    }

    #[test]
    fn parsing() {
        let s = BitStream::from_ascii("x", "01 1\n0").unwrap();
        assert_eq!(s.to_ascii(), "0110");
        assert_eq!(BitStream::from_ascii("x", "012"), Err(BitStreamError::BadChar('2', 2)));
        assert_eq!(BitStream::from_ascii("x", " \n"), Err(BitStreamError::Empty));
        assert_eq!(BitStream::from_bytes("x", &[0b1010_0001]).unwrap().to_ascii(), "10100001");
    }

    #[test]
    fn battery_on_reference_stream() {
        let s = BitStream::new("ref", reference_stream(1, 10_000)).unwrap();
        let r = run_battery(&s, &BatteryConfig::default());
        assert_eq!(r.summary, BatterySummary { pass: 4, fail: 0, insufficient_length: 0, descriptive: 1 });
        assert_eq!(r, run_battery(&s, &BatteryConfig::default()));
    }

    #[test]
    fn battery_on_zeros() {
        let s = BitStream::new("zeros", alloc::vec![false; 10_000]).unwrap();
        let r = run_battery(&s, &BatteryConfig::default());
        assert_eq!(r.summary.fail, 4);
    }
}
