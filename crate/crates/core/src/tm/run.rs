use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::detect::NonHaltingCertificate;
use super::TuringMachine;
use crate::seed::mix64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("input symbol {0:?} is not in the input alphabet")]
    InputSymbol(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RunResult {
    /// A halt state was reached after exactly `steps` transitions.
    /// `rejected` marks a halt caused by a missing transition.
    Halted { steps: u64, output: String, rejected: bool },
    FuelExhausted { fuel: u64 },
    NonHalting { certificate: NonHaltingCertificate },
}

/// Two-sided tape; cell `i >= 0` lives in `right[i]`, cell `-i-1` in
/// `left[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Tape {
    right: Vec<u8>,
    left: Vec<u8>,
}

impl Tape {
    fn get(&self, pos: i64) -> u8 {
        if pos >= 0 {
            self.right.get(pos as usize).copied().unwrap_or(0)
        } else {
            self.left.get((-pos - 1) as usize).copied().unwrap_or(0)
        }
    }

    fn set(&mut self, pos: i64, sym: u8) {
        let (v, i) = if pos >= 0 { (&mut self.right, pos as usize) } else { (&mut self.left, (-pos - 1) as usize) };
        if i >= v.len() {
            if sym == 0 {
                return;
            }
            v.resize(i + 1, 0);
        }
        v[i] = sym;
    }

    /// Leftmost and rightmost non-blank positions.
    fn extent(&self) -> Option<(i64, i64)> {
        let lo = self
            .left
            .iter()
            .rposition(|&s| s != 0)
            .map(|i| -(i as i64) - 1)
            .or_else(|| self.right.iter().position(|&s| s != 0).map(|i| i as i64))?;
        let hi = self
            .right
            .iter()
            .rposition(|&s| s != 0)
            .map(|i| i as i64)
            .or_else(|| self.left.iter().position(|&s| s != 0).map(|i| -(i as i64) - 1))?;
        Some((lo, hi))
    }
}

/// A complete machine configuration: state, absolute head position and the
/// non-blank part of the tape starting at `offset`. Two equal configurations
/// imply identical futures.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: usize,
    pub head: i64,
    pub offset: i64,
    pub cells: Vec<u8>,
}

/// Hash contribution of one tape cell. Blank cells contribute nothing, so
/// the XOR over all cells depends only on the non-blank content.
fn cell_hash(pos: i64, sym: u8) -> u64 {
    if sym == 0 {
        0
    } else {
        mix64((pos as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (sym as u64) << 56)
    }
}

fn head_hash(state: usize, head: i64) -> u64 {
    mix64(mix64(state as u64 ^ 0xA076_1D64_78BD_642F) ^ head as u64)
}

impl Config {
    /// Equal configurations have equal fingerprints. Agrees with
    /// [`Execution::fingerprint`].
    pub fn fingerprint(&self) -> u64 {
        let cells = self.cells.iter().enumerate().fold(0, |h, (i, &s)| h ^ cell_hash(self.offset + i as i64, s));
        cells ^ head_hash(self.state, self.head)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Running,
    Halted,
    /// No transition for the current (state, symbol).
    Rejected,
}

/// A machine in the middle of a run.
#[derive(Debug, Clone)]
pub struct Execution<'a> {
    tm: &'a TuringMachine,
    tape: Tape,
    head: i64,
    state: usize,
    steps: u64,
    status: Status,
    /// XOR of `cell_hash` over the tape, kept up to date on every write.
    tape_hash: u64,
}

impl<'a> Execution<'a> {
    pub fn new(tm: &'a TuringMachine, input: &str) -> Result<Self, RunError> {
        let mut tape = Tape::default();
        let mut tape_hash = 0;
        for (i, c) in input.chars().enumerate() {
            if !tm.input_alphabet().contains(&c) {
                return Err(RunError::InputSymbol(c));
            }
            let sym = tm.symbol_index(c).expect("input alphabet is part of the tape alphabet");
            tape.set(i as i64, sym);
            tape_hash ^= cell_hash(i as i64, sym);
        }
        let status = if tm.is_halt(tm.start()) { Status::Halted } else { Status::Running };
        Ok(Self { tm, tape, head: 0, state: tm.start(), steps: 0, status, tape_hash })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    /// Execute one transition.
    pub fn step(&mut self) -> Status {
        if self.status != Status::Running {
            return self.status;
        }
        let sym = self.tape.get(self.head);
        match self.tm.transition(self.state, sym) {
            None => self.status = Status::Rejected,
            Some(t) => {
                self.tape_hash ^= cell_hash(self.head, sym) ^ cell_hash(self.head, t.write);
                self.tape.set(self.head, t.write);
                self.head += match t.movement {
                    super::Move::L => -1,
                    super::Move::R => 1,
                };
                self.state = t.next;
                self.steps += 1;
                if self.tm.is_halt(self.state) {
                    self.status = Status::Halted;
                }
            }
        }
        self.status
    }

    /// Step until halted or `steps() == fuel`.
    pub fn run_until(&mut self, fuel: u64) -> Status {
        while self.status == Status::Running && self.steps < fuel {
            self.step();
        }
        self.status
    }

    pub fn config(&self) -> Config {
        match self.tape.extent() {
            None => Config { state: self.state, head: self.head, offset: 0, cells: Vec::new() },
            Some((lo, hi)) => Config {
                state: self.state,
                head: self.head,
                offset: lo,
                cells: (lo..=hi).map(|p| self.tape.get(p)).collect(),
            },
        }
    }

    /// Same value as `self.config().fingerprint()`, in constant time.
    pub fn fingerprint(&self) -> u64 {
        self.tape_hash ^ head_hash(self.state, self.head)
    }

    /// `self.config() == *c` without building the configuration.
    pub fn matches(&self, c: &Config) -> bool {
        if self.state != c.state || self.head != c.head {
            return false;
        }
        match self.tape.extent() {
            None => c.cells.is_empty(),
            Some((lo, hi)) => {
                lo == c.offset
                    && (hi - lo + 1) as usize == c.cells.len()
                    && (lo..=hi).zip(&c.cells).all(|(p, &s)| self.tape.get(p) == s)
            }
        }
    }

    /// Non-blank extent of the tape, if any.
    pub fn tape_extent(&self) -> Option<(i64, i64)> {
        self.tape.extent()
    }

    /// Tape from the leftmost to the rightmost non-blank cell.
    pub fn output(&self) -> String {
        let syms = self.tm.symbols();
        match self.tape.extent() {
            None => String::new(),
            Some((lo, hi)) => (lo..=hi).map(|p| syms[self.tape.get(p) as usize]).collect(),
        }
    }
}

/// Simulate for at most `fuel` transitions.
pub fn run(tm: &TuringMachine, input: &str, fuel: u64) -> Result<RunResult, RunError> {
    let mut ex = Execution::new(tm, input)?;
    Ok(match ex.run_until(fuel) {
        Status::Running => RunResult::FuelExhausted { fuel },
        s => RunResult::Halted { steps: ex.steps, output: ex.output(), rejected: s == Status::Rejected },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::format::parse_tm;

    fn tm(body: &str) -> TuringMachine {
        parse_tm(body).unwrap()
    }

    #[test]
    fn write_then_halt() {
        let m = tm("states: A H\nsymbols: 1\ninput: 1\nstart: A\nhalt: H\nA _ -> H 1 R\nA 1 -> H 1 R\n");
        for input in ["", "1", "111"] {
            assert!(matches!(run(&m, input, 10).unwrap(), RunResult::Halted { steps: 1, .. }));
        }
    }

    #[test]
    fn right_runner_exhausts_fuel() {
        let m = tm("states: A\nstart: A\nA _ -> A _ R\n");
        assert_eq!(run(&m, "", 100).unwrap(), RunResult::FuelExhausted { fuel: 100 });
    }

    #[test]
    fn busy_beavers() {
        // Step counts cross-checked with an independent script.
        let bb2 = tm("states: A B H\nsymbols: 1\nstart: A\nhalt: H\nA _ -> B 1 R\nA 1 -> B 1 L\nB _ -> A 1 L\nB 1 -> H 1 R\n");
        assert_eq!(run(&bb2, "", 1000).unwrap(), RunResult::Halted { steps: 6, output: "1111".into(), rejected: false });
        let bb4 = tm("states: A B C D H\nsymbols: 1\nstart: A\nhalt: H\n\
            A _ -> B 1 R\nA 1 -> B 1 L\nB _ -> A 1 L\nB 1 -> C _ L\n\
            C _ -> H 1 R\nC 1 -> D 1 L\nD _ -> D 1 R\nD 1 -> A _ R\n");
        assert_eq!(
            run(&bb4, "", 1000).unwrap(),
            RunResult::Halted { steps: 107, output: "1_111111111111".into(), rejected: false }
        );
    }

    #[test]
    fn missing_transition_is_flagged_reject() {
        let m = tm("states: A B\nsymbols: 1\nstart: A\nA _ -> B 1 L\n");
        assert_eq!(run(&m, "", 10).unwrap(), RunResult::Halted { steps: 1, output: "1".into(), rejected: true });
    }

    #[test]
    fn start_in_halt_state() {
        let m = tm("states: H\nstart: H\nhalt: H\n");
        assert!(matches!(run(&m, "", 0).unwrap(), RunResult::Halted { steps: 0, .. }));
    }

    #[test]
    fn bad_input_symbol() {
        let m = tm("states: A\nsymbols: 1\nstart: A\nA _ -> A _ R\n");
        assert_eq!(run(&m, "1", 3), Err(RunError::InputSymbol('1')));
    }

    #[test]
    fn config_is_translation_sensitive() {
        let m = tm("states: A\nsymbols: 1\nstart: A\nA _ -> A 1 L\n");
        let mut ex = Execution::new(&m, "").unwrap();
        let c0 = ex.config();
        ex.step();
        let c1 = ex.config();
        assert_ne!(c0, c1);
        assert_eq!(c1, Config { state: 0, head: -1, offset: 0, cells: alloc::vec![1] });
    }

    #[test]
    fn incremental_fingerprint_agrees() {
        let m = tm("states: A B C D H\nsymbols: 1\nstart: A\nhalt: H\n\
            A _ -> B 1 R\nA 1 -> B 1 L\nB _ -> A 1 L\nB 1 -> C _ L\n\
            C _ -> H 1 R\nC 1 -> D 1 L\nD _ -> D 1 R\nD 1 -> A _ R\n");
        let mut ex = Execution::new(&m, "").unwrap();
        while ex.status() == Status::Running {
            let c = ex.config();
            assert_eq!(ex.fingerprint(), c.fingerprint());
            assert!(ex.matches(&c));
            ex.step();
        }
    }
}
