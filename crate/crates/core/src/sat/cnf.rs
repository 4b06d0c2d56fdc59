use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Signed variable index: `3` is x3, `-3` is its negation. Never zero.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CnfError {
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal {lit} in clause {clause} is outside 1..={num_vars}")]
    LiteralOutOfRange { lit: i64, clause: usize, num_vars: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self, CnfError> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(CnfError::EmptyClause(i));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() > num_vars {
                    return Err(CnfError::LiteralOutOfRange { lit: l.into(), clause: i, num_vars });
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// The same formula without clause `i`.
    pub fn without_clause(&self, i: usize) -> Self {
        let mut clauses = self.clauses.clone();
        clauses.remove(i);
        Self { num_vars: self.num_vars, clauses }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssignmentError {
    #[error("assignment covers {got} variables, formula has {expected}")]
    Partial { expected: u32, got: u32 },
    #[error("literal 0 is not a variable")]
    Zero,
    #[error("variable {0} assigned twice")]
    Repeated(u32),
    #[error("variable {missing} missing from an assignment mentioning {max}")]
    Gap { missing: u32, max: u32 },
}

/// Total truth assignment to x1..xn. Serialized as signed literals, e.g.
/// `[1, -2, 3]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    /// Build from signed literals naming every variable 1..=max exactly once,
    /// in any order.
    pub fn from_literals(lits: &[i64]) -> Result<Self, AssignmentError> {
        let max = lits.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0);
        let max = u32::try_from(max).map_err(|_| AssignmentError::Gap { missing: 1, max: u32::MAX })?;
        let mut slots: Vec<Option<bool>> = alloc::vec![None; max as usize];
        for &l in lits {
            if l == 0 {
                return Err(AssignmentError::Zero);
            }
            let v = l.unsigned_abs() as u32;
            let slot = &mut slots[v as usize - 1];
            if slot.is_some() {
                return Err(AssignmentError::Repeated(v));
            }
            *slot = Some(l > 0);
        }
        let values = slots
            .iter()
            .enumerate()
            .map(|(i, s)| s.ok_or(AssignmentError::Gap { missing: i as u32 + 1, max }))
            .collect::<Result<_, _>>()?;
        Ok(Self { values })
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of variable `v` (1-based).
    pub fn value(&self, v: u32) -> Option<bool> {
        self.values.get((v as usize).checked_sub(1)?).copied()
    }

    pub fn satisfies_literal(&self, l: Literal) -> bool {
        self.value(l.unsigned_abs()) == Some(l > 0)
    }

    pub fn literals(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.iter().enumerate().map(|(i, &b)| if b { i as i64 + 1 } else { -(i as i64 + 1) })
    }
}

impl TryFrom<Vec<i64>> for Assignment {
    type Error = AssignmentError;
    fn try_from(v: Vec<i64>) -> Result<Self, AssignmentError> {
        Assignment::from_literals(&v)
    }
}

impl From<Assignment> for Vec<i64> {
    fn from(a: Assignment) -> Vec<i64> {
        a.literals().collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.literals().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Does `a` satisfy every clause? Linear in the formula size. An assignment
/// that does not cover exactly the formula's variables is an error.
pub fn verify_assignment(f: &CnfFormula, a: &Assignment) -> Result<bool, AssignmentError> {
    if a.num_vars() != f.num_vars {
        return Err(AssignmentError::Partial { expected: f.num_vars, got: a.num_vars() });
    }
    Ok(f.clauses.iter().all(|c| c.iter().any(|&l| a.satisfies_literal(l))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn tautology_always_true() {
        let f = CnfFormula::new(1, vec![vec![1, -1]]).unwrap();
        for b in [true, false] {
            assert!(verify_assignment(&f, &Assignment::new(vec![b])).unwrap());
        }
    }

    #[test]
    fn contradiction_false() {
        let f = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(!verify_assignment(&f, &Assignment::new(vec![true])).unwrap());
    }

    #[test]
    fn partial_is_error() {
        let f = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(
            verify_assignment(&f, &Assignment::new(vec![true])),
            Err(AssignmentError::Partial { expected: 3, got: 1 })
        );
    }

    #[test]
    fn formula_validation() {
        assert_eq!(CnfFormula::new(2, vec![vec![]]), Err(CnfError::EmptyClause(0)));
        assert!(CnfFormula::new(2, vec![vec![3]]).is_err());
        assert!(CnfFormula::new(2, vec![vec![0]]).is_err());
    }

    #[test]
    fn literal_form() {
        let a = Assignment::from_literals(&[-2, 1, 3]).unwrap();
        assert_eq!(a, Assignment::new(vec![true, false, true]));
        assert_eq!(a.to_string(), "1 -2 3");
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,-2,3]");
        assert_eq!(Assignment::from_literals(&[1, -1]), Err(AssignmentError::Repeated(1)));
        assert_eq!(Assignment::from_literals(&[1, 3]), Err(AssignmentError::Gap { missing: 2, max: 3 }));
        assert_eq!(Assignment::from_literals(&[0]), Err(AssignmentError::Zero));
        assert!(serde_json::from_str::<Assignment>("[1,1]").is_err());
    }

    fn formula_and_assignment() -> impl Strategy<Value = (CnfFormula, Assignment)> {
        (1u32..8).prop_flat_map(|n| {
            let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            (
                proptest::collection::vec(proptest::collection::vec(lit, 1..4), 1..12),
                proptest::collection::vec(any::<bool>(), n as usize),
            )
                .prop_map(move |(cs, vals)| (CnfFormula::new(n, cs).unwrap(), Assignment::new(vals)))
        })
    }

    proptest! {
        #[test]
        fn monotone_under_clause_removal((f, a) in formula_and_assignment(), pick in any::<prop::sample::Index>()) {
            if verify_assignment(&f, &a).unwrap() {
                let sub = f.without_clause(pick.index(f.clauses().len()));
                prop_assert!(verify_assignment(&sub, &a).unwrap());
            }
        }
    }
}
