//! Lower bounds on the halting probability of a small prefix-free machine.
//!
//! The machine reads its program as a stream of self-delimiting
//! instructions. Instruction `k` (counting from 0) costs `2^k` base steps.
//!
//! | bits    | instruction | effect                                     |
//! |---------|-------------|--------------------------------------------|
//! | `00`    | HALT        | halts if every program bit has been read, otherwise diverges |
//! | `01`    | LOOP        | diverges                                   |
//! | `10 c`  | SKIP        | reads and ignores `1 + c` further bits     |
//! | `11 c`  | COUNTDOWN   | spends `4^(c + 1)` extra steps             |
//!
//! Reading past the end of the program diverges. Because a halting run reads
//! its program exactly, no halting program is a proper prefix of another and
//! the sum of `2^-|p|` over halting programs is at most 1.
//!
//! Stage `t` of the dovetailer runs every program of at most `t` bits with a
//! budget of `t` steps. The stage values only ever grow and converge to the
//! machine's halting probability, but nothing computable says how fast: the
//! bits they produce are never certified digits.

mod dovetail;
mod dyadic;
mod machine;

pub use dovetail::{dovetail, emit_bits, stage_line, EmittedBits, OmegaStage, BITS_STATUS, CONVERGENCE_NOTE};
pub use dyadic::Dyadic;
pub use machine::{exec_prefix, step_program, Prefix, ProgramState};
