//! Universal proof systems over a finite alphabet.
//!
//! A system has axioms and rules written as meta-strings: sequences of
//! terminals and variables. A derivation is a finite ordered tree of ground
//! strings whose leaves instantiate axioms and whose inner nodes, together
//! with their children, instantiate rules. `P[k]` is the finite set of
//! derivations whose labels have at most `k` symbols in total.

mod derivation;
mod enumerate;
pub mod format;
mod matching;
pub mod toy;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use derivation::{check_derivation, Annotation, Derivation};
pub use enumerate::{bounded_decide, enumerate_derivations, Decision, EnumerationError, UNDECIDABILITY_NOTE};
pub use format::{parse_proof_system, to_text, ProofParseError};
pub use matching::match_all;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    Term(char),
    Var(String),
}

/// A sequence of terminals and variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct MetaString(pub Vec<Symbol>);

impl MetaString {
    /// A meta-string without variables.
    pub fn ground(s: &str) -> Self {
        Self(s.chars().map(Symbol::Term).collect())
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(|s| matches!(s, Symbol::Term(_)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        self.0
            .iter()
            .filter_map(|s| match s {
                Symbol::Var(v) => Some(v.as_str()),
                Symbol::Term(_) => None,
            })
            .collect()
    }

    pub fn terminals(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().filter_map(|s| match s {
            Symbol::Term(c) => Some(*c),
            Symbol::Var(_) => None,
        })
    }

    /// The terminal string, if ground.
    pub fn as_ground(&self) -> Option<String> {
        self.0
            .iter()
            .map(|s| match s {
                Symbol::Term(c) => Some(*c),
                Symbol::Var(_) => None,
            })
            .collect()
    }
}

/// Terminals as themselves, variables as `?name`, separated by spaces where a
/// variable name would otherwise run into the next symbol.
impl fmt::Display for MetaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut prev_var = false;
        for s in &self.0 {
            match s {
                Symbol::Term(c) => {
                    if prev_var && (c.is_alphanumeric() || *c == '_') {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                    prev_var = false;
                }
                Symbol::Var(v) => {
                    if prev_var {
                        f.write_str(" ")?;
                    }
                    write!(f, "?{v}")?;
                    prev_var = true;
                }
            }
        }
        Ok(())
    }
}

/// Simultaneous replacement of variables.
pub type Substitution = BTreeMap<String, MetaString>;

/// Replace every mapped variable; unmapped variables stay.
pub fn instantiate(meta: &MetaString, sub: &Substitution) -> MetaString {
    let mut out = Vec::with_capacity(meta.len());
    for s in &meta.0 {
        match s {
            Symbol::Var(v) => match sub.get(v) {
                Some(m) => out.extend(m.0.iter().cloned()),
                None => out.push(s.clone()),
            },
            Symbol::Term(_) => out.push(s.clone()),
        }
    }
    MetaString(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub premises: Vec<MetaString>,
    pub conclusion: MetaString,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofSystemError {
    #[error("the alphabet is empty")]
    EmptySigma,
    #[error("the output alphabet is empty")]
    EmptySigma0,
    #[error("output symbol {0:?} is not in the alphabet")]
    Sigma0NotSubset(char),
    #[error("{0:?} cannot be a terminal")]
    ReservedTerminal(char),
    #[error("{place} uses {symbol:?}, which is not in the alphabet")]
    UnknownTerminal { place: String, symbol: char },
    #[error("rule {0} has no premises")]
    NoPremises(usize),
    #[error("conclusion of rule {rule} uses ?{var}, which no premise binds")]
    UnboundVariable { rule: usize, var: String },
}

/// Characters with a meaning in the text format.
pub const RESERVED: &[char] = &[',', '>', '?', '#'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofSystem {
    sigma: BTreeSet<char>,
    sigma0: BTreeSet<char>,
    axioms: Vec<MetaString>,
    rules: Vec<Rule>,
}

impl ProofSystem {
    pub fn new(
        sigma: BTreeSet<char>,
        sigma0: BTreeSet<char>,
        axioms: Vec<MetaString>,
        rules: Vec<Rule>,
    ) -> Result<Self, ProofSystemError> {
        if sigma.is_empty() {
            return Err(ProofSystemError::EmptySigma);
        }
        if sigma0.is_empty() {
            return Err(ProofSystemError::EmptySigma0);
        }
        if let Some(&c) = sigma.iter().find(|c| RESERVED.contains(c) || c.is_whitespace()) {
            return Err(ProofSystemError::ReservedTerminal(c));
        }
        if let Some(&c) = sigma0.iter().find(|c| !sigma.contains(c)) {
            return Err(ProofSystemError::Sigma0NotSubset(c));
        }
        let check = |m: &MetaString, place: String| -> Result<(), ProofSystemError> {
            match m.terminals().find(|c| !sigma.contains(c)) {
                Some(symbol) => Err(ProofSystemError::UnknownTerminal { place, symbol }),
                None => Ok(()),
            }
        };
        for (i, a) in axioms.iter().enumerate() {
            check(a, alloc::format!("axiom {i}"))?;
        }
        for (i, r) in rules.iter().enumerate() {
            if r.premises.is_empty() {
                return Err(ProofSystemError::NoPremises(i));
            }
            for p in &r.premises {
                check(p, alloc::format!("rule {i}"))?;
            }
            check(&r.conclusion, alloc::format!("rule {i}"))?;
            let bound: BTreeSet<&str> = r.premises.iter().flat_map(|p| p.variables()).collect();
            if let Some(v) = r.conclusion.variables().into_iter().find(|v| !bound.contains(v)) {
                return Err(ProofSystemError::UnboundVariable { rule: i, var: v.into() });
            }
        }
        Ok(Self { sigma, sigma0, axioms, rules })
    }

    pub fn sigma(&self) -> &BTreeSet<char> {
        &self.sigma
    }

    pub fn sigma0(&self) -> &BTreeSet<char> {
        &self.sigma0
    }

    pub fn axioms(&self) -> &[MetaString] {
        &self.axioms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }
}
