//! Text format for proof systems.
//!
//! ```text
//! SIGMA
//! a b
//! SIGMA0
//! a b
//! AXIOMS
//! a
//! RULES
//! ?x => ?x ?x
//! ?x, ?y => ?x ?y b b
//! ```
//!
//! Terminals are single characters. Variables are `?` followed by letters,
//! digits or `_`. Whitespace inside a meta-string only separates symbols.
//! Lines starting with `#` are comments.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{MetaString, ProofSystem, ProofSystemError, Rule, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    System(#[from] ProofSystemError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ProofParseError {
    ProofParseError::Syntax { line, msg: msg.into() }
}

/// Parse one meta-string.
pub fn parse_meta(text: &str) -> Result<MetaString, String> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '?' => {
                let mut name = String::new();
                while let Some(&n) = chars.peek() {
                    if n.is_alphanumeric() || n == '_' {
                        name.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    return Err("`?` must be followed by a variable name".into());
                }
                out.push(Symbol::Var(name));
            }
            ',' | '>' | '#' => return Err(alloc::format!("unexpected `{c}`")),
            c => out.push(Symbol::Term(c)),
        }
    }
    Ok(MetaString(out))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Sigma,
    Sigma0,
    Axioms,
    Rules,
}

fn alphabet(line: usize, text: &str, into: &mut BTreeSet<char>) -> Result<(), ProofParseError> {
    for tok in text.split_whitespace() {
        let mut cs = tok.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => {
                into.insert(c);
            }
            _ => return Err(syntax(line, alloc::format!("`{tok}` is not a single character"))),
        }
    }
    Ok(())
}

pub fn parse_proof_system(text: &str) -> Result<ProofSystem, ProofParseError> {
    let mut section = None;
    let mut seen = BTreeSet::new();
    let (mut sigma, mut sigma0) = (BTreeSet::new(), BTreeSet::new());
    let (mut axioms, mut rules) = (Vec::new(), Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let header = match l {
            "SIGMA" => Some(Section::Sigma),
            "SIGMA0" => Some(Section::Sigma0),
            "AXIOMS" => Some(Section::Axioms),
            "RULES" => Some(Section::Rules),
            _ => None,
        };
        if let Some(h) = header {
            if !seen.insert(h) {
                return Err(syntax(line, alloc::format!("section {l} appears twice")));
            }
            section = Some(h);
            continue;
        }
        match section {
            None => return Err(syntax(line, "content before the first section header")),
            Some(Section::Sigma) => alphabet(line, l, &mut sigma)?,
            Some(Section::Sigma0) => alphabet(line, l, &mut sigma0)?,
            Some(Section::Axioms) => axioms.push(parse_meta(l).map_err(|m| syntax(line, m))?),
            Some(Section::Rules) => {
                let (lhs, rhs) = l.split_once("=>").ok_or_else(|| syntax(line, "rule without `=>`"))?;
                let premises = lhs
                    .split(',')
                    .map(|p| parse_meta(p).map_err(|m| syntax(line, m)))
                    .collect::<Result<Vec<_>, _>>()?;
                if premises.iter().any(MetaString::is_empty) {
                    return Err(syntax(line, "empty premise"));
                }
                let conclusion = parse_meta(rhs).map_err(|m| syntax(line, m))?;
                rules.push(Rule { premises, conclusion });
            }
        }
    }
    Ok(ProofSystem::new(sigma, sigma0, axioms, rules)?)
}

pub fn to_text(ps: &ProofSystem) -> String {
    let join = |s: &BTreeSet<char>| s.iter().map(|c| alloc::format!("{c}")).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "SIGMA\n{}\nSIGMA0\n{}\nAXIOMS", join(ps.sigma()), join(ps.sigma0()));
    for a in ps.axioms() {
        let _ = writeln!(out, "{a}");
    }
    out.push_str("RULES\n");
    for r in ps.rules() {
        let prem: Vec<String> = r.premises.iter().map(|p| alloc::format!("{p}")).collect();
        let _ = writeln!(out, "{} => {}", prem.join(", "), r.conclusion);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::toy;

    #[test]
    fn round_trip_toys() {
        for ps in [toy::duplication(), toy::unary_addition()] {
            assert_eq!(parse_proof_system(&to_text(&ps)).unwrap(), ps);
        }
    }

    #[test]
    fn rule_shapes() {
        let ps = toy::duplication();
        assert_eq!(ps.rules().len(), 3);
        assert_eq!(ps.rules()[2].premises.len(), 2);
        assert_eq!(alloc::format!("{}", ps.rules()[2].conclusion), "?x ?y bb");
        let u = toy::unary_addition();
        assert_eq!(alloc::format!("{}", u.rules()[0].conclusion), "1?x+?y=1?z");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_proof_system("a\n"), Err(ProofParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_proof_system("SIGMA\nab\n"), Err(ProofParseError::Syntax { line: 2, .. })));
        assert!(matches!(
            parse_proof_system("SIGMA\na\nSIGMA0\na\nRULES\n?x -> ?x\n"),
            Err(ProofParseError::Syntax { line: 6, .. })
        ));
        assert!(matches!(
            parse_proof_system("SIGMA\na\nSIGMA0\na\nAXIOMS\na?\n"),
            Err(ProofParseError::Syntax { line: 6, .. })
        ));
        assert!(matches!(
            parse_proof_system("SIGMA\na\nSIGMA\na\n"),
            Err(ProofParseError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_proof_system("SIGMA\na\nSIGMA0\na\nRULES\n?x, => ?x\n"),
            Err(ProofParseError::Syntax { line: 6, .. })
        ));
        assert_eq!(
            parse_proof_system("SIGMA\na\nSIGMA0\na\nRULES\n?x => ?y\n"),
            Err(ProofParseError::System(ProofSystemError::UnboundVariable { rule: 0, var: "y".into() }))
        );
        assert_eq!(
            parse_proof_system("SIGMA\na\nSIGMA0\nb\n"),
            Err(ProofParseError::System(ProofSystemError::Sigma0NotSubset('b')))
        );
    }
}
