//! Turing machines with certified halting ground truth.
//!
//! Machines are deterministic, single-tape, with moves `L`/`R`. Simulation is
//! exact and fuel-bounded ([`run`]). Non-halting is never concluded from a
//! timeout; it is only asserted with a replayable certificate produced by
//! [`detect_loop`]. [`build_test_set`] turns a list of machines into a test
//! set whose every item carries such a certificate.

mod detect;
pub mod format;
mod run;
mod testset;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use detect::{check_certificate, detect_loop, LoopDetector, NonHaltingCertificate};
pub use run::{run, Config, Execution, RunError, RunResult, Status};
pub use testset::{
    build_test_set, certify, evaluate_halting_oracle, BuiltTestSet, Classification, HaltingCertificate,
    HaltingEvaluation, HaltingInstance, HaltingTestSet, CORRELATION_NOTE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: u8,
    pub movement: Move,
}

/// One rule as written by a user: `state symbol -> state' symbol' move`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    pub state: String,
    pub read: char,
    pub next: String,
    pub write: char,
    pub movement: Move,
}

/// Unvalidated description of a machine.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MachineParts {
    pub states: Vec<String>,
    pub blank: char,
    /// Non-blank tape symbols.
    pub symbols: Vec<char>,
    pub input_alphabet: Vec<char>,
    pub start: Option<String>,
    pub halt: Vec<String>,
    pub rules: Vec<RuleSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("machine declares no states")]
    NoStates,
    #[error("missing start state")]
    MissingStart,
    #[error("state {0:?} declared twice")]
    DuplicateState(String),
    #[error("symbol {0:?} declared twice")]
    DuplicateSymbol(char),
    #[error("undeclared state {name:?}")]
    UndeclaredState { name: String, rule: Option<usize> },
    #[error("undeclared symbol {symbol:?}")]
    UndeclaredSymbol { symbol: char, rule: Option<usize> },
    #[error("input symbol {0:?} must be a non-blank tape symbol")]
    BadInputSymbol(char),
    #[error("duplicate transition for ({state}, {symbol:?})")]
    DuplicateTransition { state: String, symbol: char, rule: usize },
    #[error("halt state {state} has an outgoing transition")]
    HaltStateHasTransition { state: String, rule: usize },
}

impl MachineError {
    /// Index of the offending rule, when the error is about one.
    pub fn rule(&self) -> Option<usize> {
        match self {
            MachineError::UndeclaredState { rule, .. } | MachineError::UndeclaredSymbol { rule, .. } => *rule,
            MachineError::DuplicateTransition { rule, .. } | MachineError::HaltStateHasTransition { rule, .. } => {
                Some(*rule)
            }
            _ => None,
        }
    }
}

/// A validated deterministic Turing machine. Symbol `0` is the blank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine {
    states: Vec<String>,
    symbols: Vec<char>,
    input_alphabet: Vec<char>,
    start: usize,
    halt: Vec<bool>,
    table: Vec<Option<Transition>>,
}

impl TuringMachine {
    pub fn from_parts(parts: MachineParts) -> Result<Self, MachineError> {
        if parts.states.is_empty() {
            return Err(MachineError::NoStates);
        }
        for (i, s) in parts.states.iter().enumerate() {
            if parts.states[..i].contains(s) {
                return Err(MachineError::DuplicateState(s.clone()));
            }
        }
        let mut symbols = vec![parts.blank];
        for &c in &parts.symbols {
            if symbols.contains(&c) {
                return Err(MachineError::DuplicateSymbol(c));
            }
            symbols.push(c);
        }
        for &c in &parts.input_alphabet {
            if c == parts.blank || !symbols.contains(&c) {
                return Err(MachineError::BadInputSymbol(c));
            }
        }
        let state_index = |name: &str, rule: Option<usize>| {
            parts
                .states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| MachineError::UndeclaredState { name: name.into(), rule })
        };
        let symbol_index = |c: char, rule: Option<usize>| {
            symbols
                .iter()
                .position(|&s| s == c)
                .map(|i| i as u8)
                .ok_or(MachineError::UndeclaredSymbol { symbol: c, rule })
        };
        let start = state_index(parts.start.as_deref().ok_or(MachineError::MissingStart)?, None)?;
        let mut halt = vec![false; parts.states.len()];
        for h in &parts.halt {
            halt[state_index(h, None)?] = true;
        }
        let width = symbols.len();
        let mut table = vec![None; parts.states.len() * width];
        for (i, r) in parts.rules.iter().enumerate() {
            let s = state_index(&r.state, Some(i))?;
            let read = symbol_index(r.read, Some(i))?;
            let next = state_index(&r.next, Some(i))?;
            let write = symbol_index(r.write, Some(i))?;
            if halt[s] {
                return Err(MachineError::HaltStateHasTransition { state: r.state.clone(), rule: i });
            }
            let slot = &mut table[s * width + read as usize];
            if slot.is_some() {
                return Err(MachineError::DuplicateTransition { state: r.state.clone(), symbol: r.read, rule: i });
            }
            *slot = Some(Transition { next, write, movement: r.movement });
        }
        Ok(Self { states: parts.states, symbols, input_alphabet: parts.input_alphabet, start, halt, table })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Tape alphabet, blank first.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn blank(&self) -> char {
        self.symbols[0]
    }

    pub fn input_alphabet(&self) -> &[char] {
        &self.input_alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_halt(&self, state: usize) -> bool {
        self.halt[state]
    }

    pub fn transition(&self, state: usize, symbol: u8) -> Option<Transition> {
        self.table[state * self.symbols.len() + symbol as usize]
    }

    pub fn symbol_index(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&s| s == c).map(|i| i as u8)
    }

    pub fn transition_count(&self) -> usize {
        self.table.iter().filter(|t| t.is_some()).count()
    }

    /// Back to the unvalidated description, rules in canonical
    /// (state, symbol) order.
    pub fn to_parts(&self) -> MachineParts {
        let width = self.symbols.len();
        let rules = self
            .table
            .iter()
            .enumerate()
            .filter_map(|(i, t)| {
                t.map(|t| RuleSpec {
                    state: self.states[i / width].clone(),
                    read: self.symbols[i % width],
                    next: self.states[t.next].clone(),
                    write: self.symbols[t.write as usize],
                    movement: t.movement,
                })
            })
            .collect();
        MachineParts {
            states: self.states.clone(),
            blank: self.symbols[0],
            symbols: self.symbols[1..].to_vec(),
            input_alphabet: self.input_alphabet.clone(),
            start: Some(self.states[self.start].clone()),
            halt: self.states.iter().zip(&self.halt).filter(|(_, &h)| h).map(|(s, _)| s.clone()).collect(),
            rules,
        }
    }
}
