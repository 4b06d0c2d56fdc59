//! Campaign configuration, read from TOML and overridable from the command
//! line.

use std::path::PathBuf;

use hyperprobe_core::oracles;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Halting,
    Gni,
    Sat,
    Omega,
    Randomness,
}

impl SuiteName {
    pub const ALL: [SuiteName; 5] =
        [SuiteName::Halting, SuiteName::Gni, SuiteName::Sat, SuiteName::Omega, SuiteName::Randomness];

    pub const fn as_str(self) -> &'static str {
        match self {
            SuiteName::Halting => "halting",
            SuiteName::Gni => "gni",
            SuiteName::Sat => "sat",
            SuiteName::Omega => "omega",
            SuiteName::Randomness => "randomness",
        }
    }
}

/// The device under test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleSpec {
    /// One of [`oracles::NAMES`], run in-process.
    Name(String),
    /// Program and arguments of an external oracle.
    Command(Vec<String>),
}

impl Default for OracleSpec {
    fn default() -> Self {
        OracleSpec::Name("reference".into())
    }
}

impl OracleSpec {
    /// Command-line form: a known in-process name, otherwise a command line
    /// split with shell quoting rules.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        if oracles::NAMES.contains(&s) {
            return Ok(OracleSpec::Name(s.into()));
        }
        match shlex::split(s) {
            Some(argv) if !argv.is_empty() => Ok(OracleSpec::Command(argv)),
            _ => Err(ConfigError::Oracle(s.into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HaltingParams {
    /// Fuel for certifying ground truth, not for the oracle.
    pub fuel: u64,
    pub memory_cap: usize,
    /// Corpus directory; the built-in corpus when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<PathBuf>,
}

impl Default for HaltingParams {
    fn default() -> Self {
        Self { fuel: oracles::REFERENCE_FUEL, memory_cap: 1 << 16, corpus: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GniParams {
    pub rounds: u32,
    /// Protocol runs per fixture pair.
    pub runs: u32,
}

impl Default for GniParams {
    fn default() -> Self {
        Self { rounds: 16, runs: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SatParams {
    pub sizes: Vec<u32>,
    pub reps: u32,
    /// Clause-to-variable ratio as `ratio_num / ratio_den`.
    pub ratio_num: u64,
    pub ratio_den: u64,
    pub max_degree: u32,
}

impl Default for SatParams {
    fn default() -> Self {
        Self { sizes: vec![4, 6, 8, 10, 12, 14], reps: 3, ratio_num: 426, ratio_den: 100, max_degree: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OmegaParams {
    pub max_stage: u32,
    pub bits: u32,
}

impl Default for OmegaParams {
    fn default() -> Self {
        Self { max_stage: 32, bits: 8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomnessParams {
    pub bits: usize,
    pub alpha: f64,
    pub block_len: u32,
    pub max_block: u32,
}

impl Default for RandomnessParams {
    fn default() -> Self {
        Self { bits: 10_000, alpha: 0.01, block_len: 3, max_block: 4 }
    }
}

/// A suite runs when its table is present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Suites {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halting: Option<HaltingParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gni: Option<GniParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sat: Option<SatParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub randomness: Option<RandomnessParams>,
}

impl Suites {
    pub fn all() -> Self {
        let mut s = Suites::default();
        for n in SuiteName::ALL {
            s.enable(n);
        }
        s
    }

    pub fn enabled(&self) -> Vec<SuiteName> {
        SuiteName::ALL.into_iter().filter(|&n| self.is_enabled(n)).collect()
    }

    pub fn is_enabled(&self, n: SuiteName) -> bool {
        match n {
            SuiteName::Halting => self.halting.is_some(),
            SuiteName::Gni => self.gni.is_some(),
            SuiteName::Sat => self.sat.is_some(),
            SuiteName::Omega => self.omega.is_some(),
            SuiteName::Randomness => self.randomness.is_some(),
        }
    }

    /// Enable with default parameters unless already configured.
    pub fn enable(&mut self, n: SuiteName) {
        match n {
            SuiteName::Halting => _ = self.halting.get_or_insert_with(Default::default),
            SuiteName::Gni => _ = self.gni.get_or_insert_with(Default::default),
            SuiteName::Sat => _ = self.sat.get_or_insert_with(Default::default),
            SuiteName::Omega => _ = self.omega.get_or_insert_with(Default::default),
            SuiteName::Randomness => _ = self.randomness.get_or_insert_with(Default::default),
        }
    }

    /// Keep exactly `only`, enabling any that were not configured.
    pub fn restrict(&mut self, only: &[SuiteName]) {
        let mut kept = Suites::default();
        for &n in only {
            match n {
                SuiteName::Halting => kept.halting = self.halting.take(),
                SuiteName::Gni => kept.gni = self.gni.take(),
                SuiteName::Sat => kept.sat = self.sat.take(),
                SuiteName::Omega => kept.omega = self.omega.take(),
                SuiteName::Randomness => kept.randomness = self.randomness.take(),
            }
            kept.enable(n);
        }
        *self = kept;
    }
}

pub const DEFAULT_TICK_QUANTUM_US: u64 = 1;
pub const DEFAULT_TIMEOUT_TICKS: u64 = 1 << 32;

fn default_quantum() -> u64 {
    DEFAULT_TICK_QUANTUM_US
}

fn default_timeout() -> u64 {
    DEFAULT_TIMEOUT_TICKS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    /// Master seed. Required; there is no clock-based fallback.
    pub seed: Option<u64>,
    #[serde(default)]
    pub oracle: OracleSpec,
    /// Microseconds per tick for external oracles.
    #[serde(default = "default_quantum")]
    pub tick_quantum_us: u64,
    #[serde(default = "default_timeout")]
    pub timeout_ticks: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub suites: Suites,
}

impl CampaignConfig {
    pub fn new(seed: u64, oracle: OracleSpec, suites: Suites) -> Self {
        Self {
            seed: Some(seed),
            oracle,
            tick_quantum_us: DEFAULT_TICK_QUANTUM_US,
            timeout_ticks: DEFAULT_TIMEOUT_TICKS,
            out: None,
            suites,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Toml(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(spec) = &o.oracle {
            self.oracle = spec.clone();
        }
        if !o.suites.is_empty() {
            self.suites.restrict(&o.suites);
        }
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if let Some(t) = o.timeout_ticks {
            self.timeout_ticks = t;
        }
    }

    /// Returns the master seed of a valid configuration.
    pub fn validate(&self) -> Result<u64, ConfigError> {
        let seed = self.seed.ok_or(ConfigError::NoSeed)?;
        let s = &self.suites;
        if s.enabled().is_empty() {
            return Err(ConfigError::NoSuites);
        }
        if self.tick_quantum_us == 0 {
            return Err(ConfigError::Param("tick_quantum_us must be positive".into()));
        }
        if let OracleSpec::Name(n) = &self.oracle {
            if !oracles::NAMES.contains(&n.as_str()) {
                return Err(ConfigError::Oracle(n.clone()));
            }
        }
        if let OracleSpec::Command(argv) = &self.oracle {
            if argv.is_empty() {
                return Err(ConfigError::Oracle(String::new()));
            }
        }
        if let Some(g) = &s.gni {
            if g.rounds == 0 || g.runs == 0 {
                return Err(ConfigError::Param("gni.rounds and gni.runs must be positive".into()));
            }
        }
        if let Some(p) = &s.sat {
            if p.sizes.is_empty() || p.sizes[0] == 0 || p.sizes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ConfigError::Param("sat.sizes must be positive and strictly increasing".into()));
            }
            if p.reps == 0 || p.ratio_den == 0 {
                return Err(ConfigError::Param("sat.reps and sat.ratio_den must be positive".into()));
            }
        }
        if let Some(o) = &s.omega {
            if o.max_stage == 0 {
                return Err(ConfigError::Param("omega.max_stage must be positive".into()));
            }
        }
        if let Some(r) = &s.randomness {
            if !(r.alpha > 0.0 && r.alpha < 1.0) {
                return Err(ConfigError::Param("randomness.alpha must lie in (0, 1)".into()));
            }
            if r.bits == 0 || r.block_len == 0 || r.max_block == 0 {
                return Err(ConfigError::Param("randomness.bits, block_len and max_block must be positive".into()));
            }
        }
        Ok(seed)
    }
}

/// Command-line overrides, applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub oracle: Option<OracleSpec>,
    pub suites: Vec<SuiteName>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub timeout_ticks: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Toml(String),
    #[error("no seed given; set `seed` in the config or pass --seed")]
    NoSeed,
    #[error("no suites enabled")]
    NoSuites,
    #[error("unknown oracle {0:?}")]
    Oracle(String),
    #[error("{0}")]
    Param(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file() {
        let cfg = CampaignConfig::from_toml(
            r#"
seed = 7
tick_quantum_us = 100
out = "r.json"

[oracle]
command = ["python3", "my_oracle.py", "--fast"]

[suites.halting]
fuel = 5000

[suites.sat]
sizes = [4, 8]
max_degree = 2

[suites.randomness]
"#,
        )
        .unwrap();
        assert_eq!(cfg.validate(), Ok(7));
        assert_eq!(cfg.oracle, OracleSpec::Command(vec!["python3".into(), "my_oracle.py".into(), "--fast".into()]));
        assert_eq!(cfg.suites.enabled(), [SuiteName::Halting, SuiteName::Sat, SuiteName::Randomness]);
        assert_eq!(cfg.suites.halting.as_ref().unwrap().fuel, 5000);
        assert_eq!(cfg.suites.sat.as_ref().unwrap().reps, 3);
        assert_eq!(cfg.timeout_ticks, DEFAULT_TIMEOUT_TICKS);
    }

    #[test]
    fn no_suites_is_an_error() {
        let cfg = CampaignConfig::from_toml("seed = 1\n").unwrap();
        assert_eq!(cfg.validate(), Err(ConfigError::NoSuites));
    }

    #[test]
    fn seed_is_mandatory() {
        let cfg = CampaignConfig::from_toml("[suites.omega]\n").unwrap();
        assert_eq!(cfg.validate(), Err(ConfigError::NoSeed));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(CampaignConfig::from_toml("seed = 1\n[suites.gni]\nrund = 3\n").is_err());
        assert!(CampaignConfig::from_toml("seed = 1\nsede = 2\n").is_err());
    }

    #[test]
    fn overrides() {
        let mut cfg = CampaignConfig::from_toml("seed = 1\n[suites.gni]\nrounds = 4\n[suites.omega]\n").unwrap();
        cfg.apply(&Overrides {
            oracle: Some(OracleSpec::parse("always-halts").unwrap()),
            suites: vec![SuiteName::Gni, SuiteName::Halting],
            seed: Some(9),
            out: None,
            timeout_ticks: Some(50),
        });
        assert_eq!(cfg.validate(), Ok(9));
        assert_eq!(cfg.suites.enabled(), [SuiteName::Halting, SuiteName::Gni]);
        assert_eq!(cfg.suites.gni.as_ref().unwrap().rounds, 4);
        assert_eq!(cfg.oracle, OracleSpec::Name("always-halts".into()));
        assert_eq!(cfg.timeout_ticks, 50);
    }

    #[test]
    fn oracle_spec_parsing() {
        assert_eq!(OracleSpec::parse("prng").unwrap(), OracleSpec::Name("prng".into()));
        assert_eq!(
            OracleSpec::parse("./oracle --mode 'a b'").unwrap(),
            OracleSpec::Command(vec!["./oracle".into(), "--mode".into(), "a b".into()])
        );
        assert!(OracleSpec::parse("").is_err());
    }

    #[test]
    fn bad_params() {
        let mut cfg = CampaignConfig::new(1, OracleSpec::default(), Suites::all());
        cfg.suites.sat.as_mut().unwrap().sizes = vec![8, 4];
        assert!(matches!(cfg.validate(), Err(ConfigError::Param(_))));
        let mut cfg = CampaignConfig::new(1, OracleSpec::Name("nope".into()), Suites::all());
        assert_eq!(cfg.validate(), Err(ConfigError::Oracle("nope".into())));
        cfg.oracle = OracleSpec::default();
        cfg.suites.randomness.as_mut().unwrap().alpha = 1.5;
        assert!(matches!(cfg.validate(), Err(ConfigError::Param(_))));
    }
}
