use serde::{Deserialize, Serialize};

/// Outcome of running a program under a step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProgramState {
    Halted { steps: u64 },
    /// Not halted within the budget. Includes programs that diverge.
    Running,
}

/// Outcome of running a bit string that may be the prefix of a longer
/// program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prefix {
    /// Halted after reading exactly these bits.
    Halted { steps: u64 },
    /// Diverges whatever bits follow.
    Diverges,
    /// Wants to read past the end. Longer programs may still halt.
    NeedsBits,
    /// Every extension needs more steps than the budget.
    OutOfFuel,
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl Reader<'_> {
    fn read(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos).copied()?;
        self.pos += 1;
        Some(b)
    }
}

pub fn exec_prefix(bits: &[bool], fuel: u64) -> Prefix {
    let mut r = Reader { bits, pos: 0 };
    let mut steps: u64 = 0;
    for k in 0u32.. {
        let Some(base) = 1u64.checked_shl(k) else { return Prefix::OutOfFuel };
        if steps.saturating_add(base) > fuel {
            return Prefix::OutOfFuel;
        }
        let (Some(a), Some(b)) = (r.read(), r.read()) else { return Prefix::NeedsBits };
        steps += base;
        match (a, b) {
            (false, false) => {
                return if r.pos == bits.len() { Prefix::Halted { steps } } else { Prefix::Diverges };
            }
            (false, true) => return Prefix::Diverges,
            (true, skip_or_count) => {
                let Some(c) = r.read() else { return Prefix::NeedsBits };
                if !skip_or_count {
                    for _ in 0..1 + u8::from(c) {
                        if r.read().is_none() {
                            return Prefix::NeedsBits;
                        }
                    }
                } else {
                    steps = steps.saturating_add(4u64.pow(1 + u32::from(c)));
                    if steps > fuel {
                        return Prefix::OutOfFuel;
                    }
                }
            }
        }
    }
    unreachable!("the instruction counter is unbounded")
}

/// Run the complete program `bits` for at most `fuel` steps.
pub fn step_program(bits: &[bool], fuel: u64) -> ProgramState {
    match exec_prefix(bits, fuel) {
        Prefix::Halted { steps } => ProgramState::Halted { steps },
        Prefix::Diverges | Prefix::NeedsBits | Prefix::OutOfFuel => ProgramState::Running,
    }
}

#[cfg(test)]
pub(crate) fn parse_bits(s: &str) -> alloc::vec::Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}
