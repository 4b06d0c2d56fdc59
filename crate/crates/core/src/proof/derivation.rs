use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::matching::match_all;
use super::{MetaString, ProofSystem, Symbol};

/// Which axiom or rule a node instantiates. When several fit, the lowest
/// index is recorded, so the annotation never distinguishes two derivations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Annotation {
    Axiom(usize),
    Rule(usize),
}

/// An ordered tree of ground strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Derivation {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Derivation>,
    pub annotation: Annotation,
}

impl Derivation {
    /// A node over already checked `children`, annotated canonically.
    /// `None` if no axiom (for a leaf) or rule (otherwise) fits.
    pub fn node(ps: &ProofSystem, label: String, children: Vec<Derivation>) -> Option<Self> {
        if label.is_empty() || !label.chars().all(|c| ps.sigma().contains(&c)) {
            return None;
        }
        let annotation = if children.is_empty() {
            let i = ps.axioms().iter().position(|a| !match_all(&[a], &[&label]).is_empty())?;
            Annotation::Axiom(i)
        } else {
            let labels: Vec<&str> = children.iter().map(|c| c.label.as_str()).chain([label.as_str()]).collect();
            let i = ps.rules().iter().position(|r| {
                r.premises.len() == children.len() && {
                    let pats: Vec<&MetaString> = r.premises.iter().chain([&r.conclusion]).collect();
                    !match_all(&pats, &labels).is_empty()
                }
            })?;
            Annotation::Rule(i)
        };
        Some(Self { label, children, annotation })
    }

    /// Total number of symbols over all labels.
    pub fn length(&self) -> usize {
        self.label.chars().count() + self.children.iter().map(Derivation::length).sum::<usize>()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Derivation::node_count).sum::<usize>()
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let tag = match self.annotation {
            Annotation::Axiom(i) => alloc::format!("axiom {i}"),
            Annotation::Rule(i) => alloc::format!("rule {i}"),
        };
        writeln!(f, "{:indent$}{}  [{tag}]", "", self.label, indent = 2 * depth)?;
        for c in &self.children {
            c.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

/// Root first, children indented below their parent.
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// Is every leaf a ground axiom instance and every inner node, with its
/// children, a ground rule instance? Annotations are not consulted.
pub fn check_derivation(ps: &ProofSystem, d: &Derivation) -> bool {
    d.children.iter().all(|c| check_derivation(ps, c)) && Derivation::node(ps, d.label.clone(), d.children.clone()).is_some()
}

/// Every ground instance of `meta` with exactly `len` symbols over `sigma`.
pub(crate) fn ground_instances(meta: &MetaString, len: usize, sigma: &[char]) -> Vec<String> {
    let mut vars: Vec<(&str, usize)> = Vec::new();
    let mut fixed = 0;
    for s in &meta.0 {
        match s {
            Symbol::Term(_) => fixed += 1,
            Symbol::Var(v) => match vars.iter_mut().find(|(n, _)| n == v) {
                Some(e) => e.1 += 1,
                None => vars.push((v, 1)),
            },
        }
    }
    let mut out = Vec::new();
    if fixed > len {
        return out;
    }
    let mut sub = super::Substitution::new();
    fill(meta, &vars, len - fixed, sigma, &mut sub, &mut out);
    out
}

fn fill(
    meta: &MetaString,
    vars: &[(&str, usize)],
    budget: usize,
    sigma: &[char],
    sub: &mut super::Substitution,
    out: &mut Vec<String>,
) {
    let Some((&(name, occ), rest)) = vars.split_first() else {
        if budget == 0 {
            out.push(super::instantiate(meta, sub).as_ground().expect("all variables bound"));
        }
        return;
    };
    for l in 0..=budget / occ {
        for w in words(sigma, l) {
            sub.insert(name.into(), MetaString::ground(&w));
            fill(meta, rest, budget - l * occ, sigma, sub, out);
        }
    }
    sub.remove(name);
}

fn words(sigma: &[char], len: usize) -> Vec<String> {
    let mut acc = alloc::vec![String::new()];
    for _ in 0..len {
        acc = acc.iter().flat_map(|w| sigma.iter().map(move |&c| { let mut x = w.clone(); x.push(c); x })).collect();
    }
    acc
}
