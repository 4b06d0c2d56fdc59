use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::run::{Config, Execution, RunError, Status};
use super::TuringMachine;

/// Replayable proof that a run never halts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NonHaltingCertificate {
    /// The configuration after `first` steps equals the one after `second`
    /// steps; the run is periodic with period `second - first` from then on.
    ConfigRepeat { first: u64, second: u64 },
    /// From step `start` on, the configuration returns to itself every
    /// `period` steps while head and non-blank tape stay inside a window of
    /// `window` cells.
    TapeBoundedCycle { window: u64, start: u64, period: u64 },
}

impl NonHaltingCertificate {
    /// Simulation steps needed to check the certificate.
    pub fn size(&self) -> u64 {
        match *self {
            NonHaltingCertificate::ConfigRepeat { second, .. } => second,
            NonHaltingCertificate::TapeBoundedCycle { start, period, .. } => start + period,
        }
    }
}

/// Loop detector over exact configurations.
///
/// Fingerprints of the first `memory_cap` configurations are stored; a
/// fingerprint hit is confirmed by replaying to the earlier step and comparing
/// full configurations. Past the cap, detection continues with Brent's cycle
/// search, which needs constant memory. Both paths only report cycles that
/// were confirmed by exact comparison, so every certificate is sound.
/// Unbounded excursions (a head that keeps visiting new cells) are never
/// certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopDetector {
    pub memory_cap: usize,
}

impl Default for LoopDetector {
    fn default() -> Self {
        Self { memory_cap: 1 << 16 }
    }
}

fn config_at(tm: &TuringMachine, input: &str, step: u64) -> Option<Config> {
    let mut ex = Execution::new(tm, input).ok()?;
    (ex.run_until(step) == Status::Running && ex.steps() == step).then(|| ex.config())
}

impl LoopDetector {
    pub fn with_memory_cap(memory_cap: usize) -> Self {
        Self { memory_cap }
    }

    /// Look for a repeated configuration among the first `fuel` steps.
    pub fn detect(&self, tm: &TuringMachine, input: &str, fuel: u64) -> Result<Option<NonHaltingCertificate>, RunError> {
        Ok(self.detect_counted(tm, input, fuel)?.0)
    }

    /// As [`detect`](Self::detect), also returning the number of machine
    /// steps simulated.
    pub fn detect_counted(
        &self,
        tm: &TuringMachine,
        input: &str,
        fuel: u64,
    ) -> Result<(Option<NonHaltingCertificate>, u64), RunError> {
        let mut ex = Execution::new(tm, input)?;
        let mut seen: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        let mut stored = 0usize;
        loop {
            if ex.status() != Status::Running {
                return Ok((None, ex.steps()));
            }
            if stored >= self.memory_cap {
                return Ok(brent(ex, fuel));
            }
            let steps = seen.entry(ex.fingerprint()).or_default();
            for &i in steps.iter() {
                if config_at(tm, input, i).is_some_and(|c| ex.matches(&c)) {
                    let cert = NonHaltingCertificate::ConfigRepeat { first: i, second: ex.steps() };
                    return Ok((Some(cert), ex.steps()));
                }
            }
            steps.push(ex.steps());
            stored += 1;
            if ex.steps() >= fuel {
                return Ok((None, ex.steps()));
            }
            ex.step();
        }
    }
}

/// Brent's cycle search from the current point of `ex`.
fn brent(mut ex: Execution<'_>, fuel: u64) -> (Option<NonHaltingCertificate>, u64) {
    let origin = ex.clone();
    let mut power = 1u64;
    let mut period = 1u64;
    let mut tortoise = ex.config();
    loop {
        if ex.steps() >= fuel {
            return (None, ex.steps());
        }
        if ex.step() != Status::Running {
            return (None, ex.steps());
        }
        if ex.matches(&tortoise) {
            break;
        }
        if power == period {
            tortoise = ex.config();
            power *= 2;
            period = 0;
        }
        period += 1;
    }
    let simulated = ex.steps();

    let mut a = origin.clone();
    let mut b = origin;
    for _ in 0..period {
        b.step();
    }
    while !a.matches(&b.config()) {
        a.step();
        b.step();
    }
    let start = a.steps();
    let (lo, hi) = cycle_span(&mut a, period);
    let cert = NonHaltingCertificate::TapeBoundedCycle { window: (hi - lo + 1) as u64, start, period };
    (Some(cert), simulated)
}

/// Leftmost and rightmost cell touched (head or non-blank) over the next
/// `period` steps.
fn cycle_span(ex: &mut Execution<'_>, period: u64) -> (i64, i64) {
    let mut lo = ex.head();
    let mut hi = ex.head();
    for i in 0..=period {
        lo = lo.min(ex.head());
        hi = hi.max(ex.head());
        if let Some((l, h)) = ex.tape_extent() {
            lo = lo.min(l);
            hi = hi.max(h);
        }
        if i < period {
            ex.step();
        }
    }
    (lo, hi)
}

/// Search with the default detector.
pub fn detect_loop(tm: &TuringMachine, input: &str, fuel: u64) -> Result<Option<NonHaltingCertificate>, RunError> {
    LoopDetector::default().detect(tm, input, fuel)
}

/// Replay the machine and confirm the claimed repetition.
pub fn check_certificate(tm: &TuringMachine, input: &str, cert: &NonHaltingCertificate) -> bool {
    match *cert {
        NonHaltingCertificate::ConfigRepeat { first, second } => {
            if first >= second {
                return false;
            }
            let Ok(mut ex) = Execution::new(tm, input) else { return false };
            if ex.run_until(first) != Status::Running || ex.steps() != first {
                return false;
            }
            let a = ex.config();
            ex.run_until(second) == Status::Running && ex.steps() == second && ex.config() == a
        }
        NonHaltingCertificate::TapeBoundedCycle { window, start, period } => {
            if period == 0 {
                return false;
            }
            let Ok(mut ex) = Execution::new(tm, input) else { return false };
            if ex.run_until(start) != Status::Running || ex.steps() != start {
                return false;
            }
            let a = ex.config();
            let mut probe = ex.clone();
            let (lo, hi) = cycle_span(&mut probe, period);
            ex.run_until(start + period) == Status::Running
                && ex.steps() == start + period
                && ex.config() == a
                && (hi - lo + 1) as u64 <= window
        }
    }
}
