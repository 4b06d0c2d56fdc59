//! Graph non-isomorphism by interactive proof.
//!
//! The verifier secretly picks one of two public graphs with a fair coin,
//! relabels its vertices with a uniformly random permutation and asks the
//! prover which graph the result came from. When the graphs are not
//! isomorphic an honest prover can always tell; when they are isomorphic the
//! relabelled graph carries no information about the coin, so any prover is
//! right with probability exactly 1/2 per round.

pub mod format;
mod graph;
mod iso;
mod protocol;

pub use graph::{apply_permutation, Graph, GraphError, Permutation};
pub use iso::{find_isomorphism, find_isomorphism_counted, verify_isomorphism_cert};
pub use protocol::{run_gni_protocol, GniError, GniPair, GraphChoice, ProtocolTranscript, ProtocolVerdict, Round};
