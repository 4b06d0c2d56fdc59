use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::cnf::{Assignment, CnfFormula, Literal};
use crate::seed;

/// Non-negative rational `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "ratio denominator must be positive");
        Self { num, den }
    }

    /// `floor(self * n)`.
    pub fn floor_mul(self, n: u64) -> u64 {
        (u128::from(self.num) * u128::from(n) / u128::from(self.den)) as u64
    }
}

/// Random 3-CNF over `n` variables with `floor(ratio * n)` clauses, all
/// satisfied by a hidden uniformly drawn assignment. Clauses are drawn
/// uniformly (distinct variables when `n >= 3`) and redrawn until the hidden
/// assignment satisfies them.
///
/// # Panics
/// If `n == 0`.
pub fn generate_planted(n: u32, ratio: Ratio, seed: u64) -> (CnfFormula, Assignment) {
    assert!(n >= 1, "planted instances need at least one variable");
    let mut rng = seed::rng(seed);
    let hidden = Assignment::new((0..n).map(|_| rng.gen()).collect());
    let m = ratio.floor_mul(u64::from(n));
    let mut clauses = Vec::with_capacity(m as usize);
    for _ in 0..m {
        loop {
            let mut vars = [0u32; 3];
            for i in 0..3 {
                vars[i] = loop {
                    let v = rng.gen_range(1..=n);
                    if n < 3 || !vars[..i].contains(&v) {
                        break v;
                    }
                };
            }
            let clause: Vec<Literal> =
                vars.iter().map(|&v| if rng.gen::<bool>() { v as Literal } else { -(v as Literal) }).collect();
            if clause.iter().any(|&l| hidden.satisfies_literal(l)) {
                clauses.push(clause);
                break;
            }
        }
    }
    (CnfFormula::new(n, clauses).expect("literals drawn in range"), hidden)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::verify_assignment;
    use proptest::prelude::*;

    #[test]
    fn single_variable() {
        let (f, a) = generate_planted(1, Ratio::new(1, 1), 3);
        assert_eq!(f.clauses().len(), 1);
        assert!(verify_assignment(&f, &a).unwrap());
    }

    #[test]
    fn deterministic_per_seed() {
        let r = Ratio::new(21, 5);
        let (f1, a1) = generate_planted(20, r, 99);
        let (f2, a2) = generate_planted(20, r, 99);
        assert_eq!((f1.clone(), a1), (f2, a2));
        assert_eq!(f1.clauses().len(), 84);
        assert_ne!(generate_planted(20, r, 100).0, f1);
    }

    #[test]
    fn distinct_variables_per_clause() {
        let (f, _) = generate_planted(5, Ratio::new(10, 1), 1);
        for c in f.clauses() {
            assert!(c[0].abs() != c[1].abs() && c[1].abs() != c[2].abs() && c[0].abs() != c[2].abs());
        }
    }

    proptest! {
        #[test]
        fn hidden_assignment_satisfies(n in 1u32..40, num in 0u64..60, seed in any::<u64>()) {
            let (f, a) = generate_planted(n, Ratio::new(num, 10), seed);
            prop_assert_eq!(f.clauses().len() as u64, num * u64::from(n) / 10);
            prop_assert!(verify_assignment(&f, &a).unwrap());
        }
    }
}
