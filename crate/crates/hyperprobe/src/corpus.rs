//! Turing machine corpus: `.tm` files with JSON sidecars.
//!
//! A sidecar records the machine's name, its input, the fuel used to
//! classify it and the expected [`Classification`]. Loading re-derives every
//! classification and refuses a corpus whose sidecars disagree with the
//! engine.

use std::fs;
use std::path::{Path, PathBuf};

use hyperprobe_core::tm::format::{parse_tm, ParseError};
use hyperprobe_core::tm::{certify, Classification, HaltingInstance, LoopDetector, RunError, TuringMachine};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub name: String,
    pub input: String,
    pub fuel: u64,
    pub expected: Classification,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub machine: TuringMachine,
    pub sidecar: Sidecar,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        &self.sidecar.name
    }

    pub fn instance(&self) -> HaltingInstance {
        HaltingInstance::new(self.sidecar.name.clone(), self.machine.clone(), self.sidecar.input.clone())
            .expect("input checked when the entry was loaded")
    }

    /// Classify again and compare with the sidecar.
    pub fn verify(&self, detector: LoopDetector) -> Result<(), CorpusError> {
        let found = certify(&self.machine, &self.sidecar.input, self.sidecar.fuel, detector)
            .map_err(|source| CorpusError::Input { name: self.sidecar.name.clone(), source })?;
        if found != self.sidecar.expected {
            return Err(CorpusError::Mismatch {
                name: self.sidecar.name.clone(),
                expected: Box::new(self.sidecar.expected.clone()),
                found: Box::new(found),
            });
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("machine {name}: {source}")]
    Machine { name: String, source: ParseError },
    #[error("sidecar {name}: {source}")]
    Sidecar { name: String, source: serde_json::Error },
    #[error("sidecar {file} names machine {named}")]
    Name { file: String, named: String },
    #[error("machine {0} has no sidecar")]
    MissingSidecar(String),
    #[error("machine {name}: {source}")]
    Input { name: String, source: RunError },
    #[error("machine {name}: sidecar expects {expected:?}, engine gives {found:?}")]
    Mismatch { name: String, expected: Box<Classification>, found: Box<Classification> },
}

fn entry(stem: &str, tm_text: &str, sidecar_text: &str) -> Result<CorpusEntry, CorpusError> {
    let machine = parse_tm(tm_text).map_err(|source| CorpusError::Machine { name: stem.into(), source })?;
    let sidecar: Sidecar =
        serde_json::from_str(sidecar_text).map_err(|source| CorpusError::Sidecar { name: stem.into(), source })?;
    if sidecar.name != stem {
        return Err(CorpusError::Name { file: stem.into(), named: sidecar.name });
    }
    HaltingInstance::new(stem, machine.clone(), sidecar.input.clone())
        .map_err(|source| CorpusError::Input { name: stem.into(), source })?;
    Ok(CorpusEntry { machine, sidecar })
}

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../corpus/tm/", $name, ".tm")), include_str!(concat!("../corpus/tm/", $name, ".json")))),*]
    };
}

const BUILTIN: &[(&str, &str, &str)] = shipped![
    "bb2",
    "bb3",
    "bb4",
    "bouncer",
    "counter-overflow",
    "halt-now",
    "right-runner",
    "toggler",
    "two-sided-grower",
    "window-shuttle",
    "wrap-counter",
    "write-and-return",
];

/// The corpus compiled into the binary, sorted by name.
pub fn builtin() -> Vec<CorpusEntry> {
    BUILTIN
        .iter()
        .map(|(name, tm, json)| entry(name, tm, json).expect("shipped corpus is well formed"))
        .collect()
}

/// Every `NAME.tm` in `dir` with its `NAME.json`, sorted by name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CorpusError::Io { path, source }
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io(dir))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io(dir))?;
    paths.retain(|p| p.extension().is_some_and(|x| x == "tm"));
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for tm_path in paths {
        let stem = tm_path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let side_path = tm_path.with_extension("json");
        if !side_path.exists() {
            return Err(CorpusError::MissingSidecar(stem));
        }
        let tm_text = fs::read_to_string(&tm_path).map_err(io(&tm_path))?;
        let side_text = fs::read_to_string(&side_path).map_err(io(&side_path))?;
        out.push(entry(&stem, &tm_text, &side_text)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sidecars_agree_with_engine() {
        let corpus = builtin();
        assert_eq!(corpus.len(), 12);
        for e in &corpus {
            e.verify(LoopDetector::default()).unwrap();
        }
    }

    #[test]
    fn corpus_has_both_sides_and_some_uncertified() {
        let corpus = builtin();
        let count = |f: fn(&Classification) -> bool| corpus.iter().filter(|e| f(&e.sidecar.expected)).count();
        assert!(count(|c| matches!(c, Classification::Halts { .. })) >= 5);
        assert!(count(|c| matches!(c, Classification::NonHalting { .. })) >= 4);
        assert_eq!(count(|c| matches!(c, Classification::Uncertified { .. })), 2);
    }

    #[test]
    fn wrong_sidecar_is_reported() {
        let e = entry(
            "halt-now",
            BUILTIN.iter().find(|b| b.0 == "halt-now").unwrap().1,
            r#"{"name":"halt-now","input":"","fuel":10,"expected":{"classification":"halts","steps":2,"output":"1","rejected":false}}"#,
        )
        .unwrap();
        assert!(matches!(e.verify(LoopDetector::default()), Err(CorpusError::Mismatch { .. })));
    }

    #[test]
    fn sidecar_name_must_match_file() {
        let r = entry("x", "states: A\nstart: A\n", r#"{"name":"y","input":"","fuel":1,"expected":{"classification":"uncertified","fuel":1}}"#);
        assert!(matches!(r, Err(CorpusError::Name { .. })));
    }
}
