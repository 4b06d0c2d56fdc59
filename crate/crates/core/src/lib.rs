//! Core of `hyperprobe`: a black-box test harness for devices that claim to
//! compute beyond Turing machines.
//!
//! A device under test is only ever observed through its input/output
//! interface. Everything here is pure computation over those observations:
//! transcript logs and bound checks ([`blackbox`]), Turing machines with
//! certified halting ground truth ([`tm`]), a universal proof system with
//! bounded derivation enumeration ([`proof`]), the graph non-isomorphism
//! interactive proof ([`gni`]), SAT timing campaigns and degree fitting
//! ([`sat`]), exact lower bounds of a toy halting probability ([`omega`]) and
//! a small stochasticity battery ([`randomness`]).
//!
//! No verdict produced by this crate ever claims that a device *is* a
//! hypercomputer. The vocabulary is limited to [`blackbox::Verdict`]:
//! falsified, consistent (with the finite sample), or incomplete.
//!
//! The crate is `no_std` and only needs `alloc`. Process spawning, files,
//! configuration and the CLI live in the `hyperprobe` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod blackbox;
pub mod gni;
pub mod omega;
pub mod oracle;
pub mod oracles;
pub mod proof;
pub mod randomness;
pub mod sat;
pub mod seed;
pub mod stats;
pub mod tm;

pub use blackbox::Verdict;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use oracle::{Answer, Oracle, OracleError, OracleHandle, Query, Response, Task};
