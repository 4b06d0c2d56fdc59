//! In-process oracles: reference implementations and deliberately broken
//! ones. Each reports a deterministic step count as its time.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::gni::{find_isomorphism_counted, GraphChoice};
use crate::oracle::{Answer, Oracle, OracleError, Query, Response, SatAnswer, Task};
use crate::randomness::reference_stream;
use crate::sat::{parse_dimacs, verify_assignment, Assignment, CnfFormula};
use crate::seed;
use crate::tm::{certify, format::parse_tm, run, Classification, LoopDetector, RunResult, TuringMachine};

fn unsupported(q: &Query) -> OracleError {
    OracleError::Unsupported(q.task())
}

fn machine(text: &str) -> Result<TuringMachine, OracleError> {
    parse_tm(text).map_err(|e| OracleError::Protocol(alloc::format!("bad machine: {e}")))
}

fn formula(dimacs: &str) -> Result<CnfFormula, OracleError> {
    parse_dimacs(dimacs).map_err(|e| OracleError::Protocol(alloc::format!("bad formula: {e}")))
}

/// Decides halting exactly when a run halts or a loop is certified within
/// `fuel` steps; otherwise it times out rather than guess.
#[derive(Debug, Clone)]
pub struct ReferenceHalting {
    pub fuel: u64,
    pub detector: LoopDetector,
}

impl ReferenceHalting {
    pub fn new(fuel: u64) -> Self {
        Self { fuel, detector: LoopDetector::default() }
    }

    fn answer(&self, text: &str, input: &str) -> Result<Response, OracleError> {
        let tm = machine(text)?;
        let class = certify(&tm, input, self.fuel, self.detector)
            .map_err(|e| OracleError::Protocol(e.to_string()))?;
        match class {
            Classification::Halts { steps, .. } => Ok(Response::stepped(Answer::Halts(true), steps)),
            Classification::NonHalting { certificate } => {
                Ok(Response::stepped(Answer::Halts(false), certificate.size()))
            }
            Classification::Uncertified { .. } => Err(OracleError::Timeout),
        }
    }
}

impl Oracle for ReferenceHalting {
    fn id(&self) -> &str {
        "reference-halting"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        match q {
            Query::Halting { machine, input } => self.answer(machine, input),
            _ => Err(unsupported(q)),
        }
    }
}

/// Claims "does not halt" for anything still running after `fuel` steps.
/// Wrong on every machine that halts later.
#[derive(Debug, Clone)]
pub struct TimeoutHeuristic {
    pub fuel: u64,
}

impl TimeoutHeuristic {
    pub fn new(fuel: u64) -> Self {
        Self { fuel }
    }
}

impl Oracle for TimeoutHeuristic {
    fn id(&self) -> &str {
        "timeout-heuristic"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        let Query::Halting { machine: text, input } = q else { return Err(unsupported(q)) };
        let tm = machine(text)?;
        match run(&tm, input, self.fuel).map_err(|e| OracleError::Protocol(e.to_string()))? {
            RunResult::Halted { steps, .. } => Ok(Response::stepped(Answer::Halts(true), steps)),
            _ => Ok(Response::stepped(Answer::Halts(false), self.fuel)),
        }
    }
}

/// Answers "halts" to everything in one step.
#[derive(Debug, Clone, Default)]
pub struct AlwaysHalts;

impl Oracle for AlwaysHalts {
    fn id(&self) -> &str {
        "always-halts"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        match q {
            Query::Halting { .. } => Ok(Response::stepped(Answer::Halts(true), 1)),
            _ => Err(unsupported(q)),
        }
    }
}

/// Answers from a fixed table keyed by `(machine text, input)`; anything
/// else is unsupported.
#[derive(Debug, Clone, Default)]
pub struct LookupTable {
    pub table: BTreeMap<(String, String), bool>,
}

impl Oracle for LookupTable {
    fn id(&self) -> &str {
        "lookup-table"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        let Query::Halting { machine, input } = q else { return Err(unsupported(q)) };
        match self.table.get(&(machine.clone(), input.clone())) {
            Some(&b) => Ok(Response::stepped(Answer::Halts(b), 1)),
            None => Err(OracleError::Unsupported(Task::Halting)),
        }
    }
}

/// Answers graph challenges by isomorphism search; always right when the
/// public pair is not isomorphic.
#[derive(Debug, Clone, Default)]
pub struct HonestProver;

impl HonestProver {
    pub fn new() -> Self {
        Self
    }
}

impl Oracle for HonestProver {
    fn id(&self) -> &str {
        "honest-prover"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        let Query::Gni { g1, g2, h, .. } = q else { return Err(unsupported(q)) };
        let (found, nodes) = find_isomorphism_counted(h, g1);
        let (choice, more) = match found {
            Some(_) => (GraphChoice::First, 0),
            None => {
                let (_, n2) = find_isomorphism_counted(h, g2);
                (GraphChoice::Second, n2)
            }
        };
        Ok(Response::stepped(Answer::Gni(choice), nodes + more + 1))
    }
}

/// Answers graph challenges with a seeded fair coin.
#[derive(Debug, Clone)]
pub struct GuessingProver {
    rng: ChaCha8Rng,
}

impl GuessingProver {
    pub fn new(seed: u64) -> Self {
        Self { rng: seed::rng(seed) }
    }
}

impl Oracle for GuessingProver {
    fn id(&self) -> &str {
        "guessing-prover"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        match q {
            Query::Gni { .. } => {
                let c = if self.rng.gen::<bool>() { GraphChoice::First } else { GraphChoice::Second };
                Ok(Response::stepped(Answer::Gni(c), 1))
            }
            _ => Err(unsupported(q)),
        }
    }
}

/// Tries assignments in counting order. Each assignment checked is one tick;
/// gives up with a timeout once the budget is spent.
#[derive(Debug, Clone, Default)]
pub struct BruteForceSat;

impl BruteForceSat {
    pub fn new() -> Self {
        Self
    }
}

fn assignment_from_bits(n: u32, code: u64) -> Assignment {
    Assignment::new((0..n).map(|i| code >> i & 1 == 1).collect())
}

impl Oracle for BruteForceSat {
    fn id(&self) -> &str {
        "brute-force-sat"
    }

    fn query(&mut self, q: &Query, budget: u64) -> Result<Response, OracleError> {
        let Query::Sat { dimacs } = q else { return Err(unsupported(q)) };
        let f = formula(dimacs)?;
        let n = f.num_vars();
        if n >= 64 {
            return Err(OracleError::Timeout);
        }
        for code in 0..1u64 << n {
            if code >= budget {
                return Err(OracleError::Timeout);
            }
            let a = assignment_from_bits(n, code);
            if verify_assignment(&f, &a).expect("assignment covers the formula") {
                return Ok(Response::stepped(Answer::Sat(SatAnswer::Satisfiable(a)), code + 1));
            }
        }
        Ok(Response::stepped(Answer::Sat(SatAnswer::Unsatisfiable), 1u64 << n))
    }
}

/// Returns an assignment that violates some clause.
#[derive(Debug, Clone, Default)]
pub struct LiarSat;

impl LiarSat {
    pub fn new() -> Self {
        Self
    }
}

impl Oracle for LiarSat {
    fn id(&self) -> &str {
        "liar-sat"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        let Query::Sat { dimacs } = q else { return Err(unsupported(q)) };
        let f = formula(dimacs)?;
        // Falsify the first clause that is not a tautology.
        let mut values = alloc::vec![false; f.num_vars() as usize];
        for c in f.clauses() {
            if !c.iter().any(|l| c.contains(&-l)) {
                for &l in c {
                    values[l.unsigned_abs() as usize - 1] = l < 0;
                }
                break;
            }
        }
        Ok(Response::stepped(Answer::Sat(SatAnswer::Satisfiable(Assignment::new(values))), 1))
    }
}

/// Timing shape of a synthetic SAT oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Growth {
    /// `coefficient * n^degree` ticks.
    Poly { coefficient: u64, degree: u32 },
    /// `2^n` ticks.
    Exponential,
}

/// Declines every SAT instance (answers unknown) after a time that is a
/// fixed function of the variable count. Used to exercise degree fitting.
#[derive(Debug, Clone)]
pub struct SyntheticTiming {
    pub growth: Growth,
    id: String,
}

impl SyntheticTiming {
    pub fn new(growth: Growth) -> Self {
        let id = match growth {
            Growth::Poly { coefficient, degree } => alloc::format!("synthetic-{coefficient}n^{degree}"),
            Growth::Exponential => "synthetic-2^n".into(),
        };
        Self { growth, id }
    }

    pub fn ticks(&self, n: u32) -> u64 {
        match self.growth {
            Growth::Poly { coefficient, degree } => coefficient.saturating_mul(u64::from(n).saturating_pow(degree)),
            Growth::Exponential => 1u64.checked_shl(n).unwrap_or(u64::MAX),
        }
    }
}

impl Oracle for SyntheticTiming {
    fn id(&self) -> &str {
        &self.id
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        let Query::Sat { dimacs } = q else { return Err(unsupported(q)) };
        let f = formula(dimacs)?;
        Ok(Response::stepped(Answer::Sat(SatAnswer::Unknown), self.ticks(f.num_vars())))
    }
}

/// Times out on everything.
#[derive(Debug, Clone, Default)]
pub struct NeverAnswers;

impl NeverAnswers {
    pub fn new() -> Self {
        Self
    }
}

impl Oracle for NeverAnswers {
    fn id(&self) -> &str {
        "never-answers"
    }

    fn query(&mut self, _q: &Query, _budget: u64) -> Result<Response, OracleError> {
        Err(OracleError::Timeout)
    }
}

/// Serves bits from the seeded reference generator, continuing the same
/// stream across queries.
#[derive(Debug, Clone)]
pub struct PrngBits {
    seed: u64,
    served: usize,
}

impl PrngBits {
    pub fn new(seed: u64) -> Self {
        Self { seed, served: 0 }
    }
}

impl Oracle for PrngBits {
    fn id(&self) -> &str {
        "prng-bits"
    }

    fn query(&mut self, q: &Query, _budget: u64) -> Result<Response, OracleError> {
        let Query::Bits { count } = q else { return Err(unsupported(q)) };
        let all = reference_stream(self.seed, self.served + count);
        let bits: String = all[self.served..].iter().map(|&b| if b { '1' } else { '0' }).collect();
        self.served += count;
        Ok(Response::stepped(Answer::Bits(bits), *count as u64))
    }
}

/// One oracle for every task, built from the reference parts above.
#[derive(Debug, Clone)]
pub struct ReferenceOracle {
    pub halting: ReferenceHalting,
    pub prover: HonestProver,
    pub sat: BruteForceSat,
    pub bits: PrngBits,
}

impl ReferenceOracle {
    pub fn new(halting_fuel: u64, bits_seed: u64) -> Self {
        Self {
            halting: ReferenceHalting::new(halting_fuel),
            prover: HonestProver,
            sat: BruteForceSat,
            bits: PrngBits::new(bits_seed),
        }
    }
}

/// Default halting fuel of the reference oracle.
pub const REFERENCE_FUEL: u64 = 1 << 22;

impl Oracle for ReferenceOracle {
    fn id(&self) -> &str {
        "reference"
    }

    fn query(&mut self, q: &Query, budget: u64) -> Result<Response, OracleError> {
        match q.task() {
            Task::Halting => self.halting.query(q, budget),
            Task::Gni => self.prover.query(q, budget),
            Task::Sat => self.sat.query(q, budget),
            Task::Bits => self.bits.query(q, budget),
        }
    }
}

/// Build an in-process oracle by name, as accepted on the command line.
pub fn by_name(name: &str, seed: u64) -> Option<alloc::boxed::Box<dyn Oracle + Send>> {
    use alloc::boxed::Box;
    let poly = |degree| Box::new(SyntheticTiming::new(Growth::Poly { coefficient: 3, degree }));
    Some(match name {
        "reference" => Box::new(ReferenceOracle::new(REFERENCE_FUEL, seed)),
        "timeout-heuristic" => Box::new(TimeoutHeuristic::new(1000)),
        "always-halts" => Box::new(AlwaysHalts),
        "honest-prover" => Box::new(HonestProver),
        "guessing-prover" => Box::new(GuessingProver::new(seed)),
        "brute-force-sat" => Box::new(BruteForceSat),
        "liar-sat" => Box::new(LiarSat),
        "synthetic-n1" => poly(1),
        "synthetic-n2" => poly(2),
        "synthetic-n3" => poly(3),
        "synthetic-exp" => Box::new(SyntheticTiming::new(Growth::Exponential)),
        "never-answers" => Box::new(NeverAnswers),
        "prng" => Box::new(PrngBits::new(seed)),
        _ => return None,
    })
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "reference",
    "timeout-heuristic",
    "always-halts",
    "honest-prover",
    "guessing-prover",
    "brute-force-sat",
    "liar-sat",
    "synthetic-n1",
    "synthetic-n2",
    "synthetic-n3",
    "synthetic-exp",
    "never-answers",
    "prng",
];
