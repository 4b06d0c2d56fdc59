//! The two shipped example systems.

use super::{parse_proof_system, ProofSystem};

pub const DUPLICATION: &str = include_str!("../../fixtures/proof/duplication.ps");
pub const UNARY_ADDITION: &str = include_str!("../../fixtures/proof/unary-addition.ps");

/// Axiom `a`; rules `?x => ?x ?x`, `?x => ?x a` and `?x, ?y => ?x ?y b b`.
pub fn duplication() -> ProofSystem {
    parse_proof_system(DUPLICATION).expect("shipped system parses")
}

/// Axiom `+=`; rules adding one to either summand and to the sum.
pub fn unary_addition() -> ProofSystem {
    parse_proof_system(UNARY_ADDITION).expect("shipped system parses")
}
