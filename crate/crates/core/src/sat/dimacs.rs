//! DIMACS CNF.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::cnf::{CnfFormula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {0}: malformed header")]
    BadHeader(usize),
    #[error("line {line}: `{token}` is not a literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} outside 1..={num_vars}")]
    LiteralOutOfRange { line: usize, lit: i64, num_vars: u32 },
    #[error("line {0}: empty clause")]
    EmptyClause(usize),
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("header declares {declared} clauses, body has {found}")]
    ClauseCount { declared: usize, found: usize },
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        if l.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::BadHeader(line));
            }
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| DimacsError::BadHeader(line))?;
                    let c = c.parse().map_err(|_| DimacsError::BadHeader(line))?;
                    header = Some((v, c));
                }
                _ => return Err(DimacsError::BadHeader(line)),
            }
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for tok in l.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| DimacsError::BadToken { line, token: tok.into() })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause(line));
                }
                clauses.push(core::mem::take(&mut current));
            } else if lit.unsigned_abs() > u64::from(num_vars) {
                return Err(DimacsError::LiteralOutOfRange { line, lit, num_vars });
            } else {
                current.push(lit as Literal);
            }
        }
    }
    let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount { declared, found: clauses.len() });
    }
    Ok(CnfFormula::new(num_vars, clauses).expect("literals range-checked while parsing"))
}

/// One clause per line.
pub fn to_dimacs(f: &CnfFormula) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p cnf {} {}", f.num_vars(), f.clauses().len());
    for c in f.clauses() {
        for l in c {
            let _ = write!(s, "{l} ");
        }
        s.push_str("0\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn minimal() {
        let f = parse_dimacs("p cnf 1 1\n1 -1 0\n").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert_eq!(f.clauses(), &[vec![1, -1]]);
    }

    #[test]
    fn comments_and_wrapped_clauses() {
        let f = parse_dimacs("c hello\np cnf 3 2\n1 2\n-3 0 c\n2 0\n");
        // A trailing `c` on a clause line is not a comment.
        assert!(matches!(f, Err(DimacsError::BadToken { line: 4, .. })));
        let f = parse_dimacs("c hello\np cnf 3 2\n1 2\n-3 0\n\n2 0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, -3], vec![2]]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_dimacs("p cnf 2 2\n1 2 0\n"), Err(DimacsError::ClauseCount { declared: 2, found: 1 }));
        assert_eq!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(DimacsError::Unterminated));
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 3 0\n"),
            Err(DimacsError::LiteralOutOfRange { line: 2, lit: 3, num_vars: 2 })
        );
        assert_eq!(parse_dimacs("1 2 0\n"), Err(DimacsError::MissingHeader));
        assert_eq!(parse_dimacs(""), Err(DimacsError::MissingHeader));
        assert_eq!(parse_dimacs("p cnf x 1\n"), Err(DimacsError::BadHeader(1)));
        assert_eq!(parse_dimacs("p cnf 1 1\n0\n"), Err(DimacsError::EmptyClause(2)));
    }

    #[test]
    fn round_trip_planted_fixture() {
        let (f, _) = crate::sat::generate_planted(12, crate::sat::Ratio::new(25, 6), 7);
        assert_eq!(f.clauses().len(), 50);
        let text = to_dimacs(&f);
        let g = parse_dimacs(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(to_dimacs(&g), text);
    }
}
