//! Matching ground strings against meta-string patterns.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{MetaString, Symbol};

#[derive(Clone, Copy)]
enum Sym {
    T(char),
    V(usize),
}

type State = (usize, usize, usize, Vec<Option<Vec<char>>>);

struct Matcher<'a> {
    pats: Vec<Vec<Sym>>,
    /// Terminals left in each pattern from each position; a cheap lower bound
    /// on the ground characters still needed.
    min_rest: Vec<Vec<usize>>,
    grounds: &'a [Vec<char>],
    binding: Vec<Option<Vec<char>>>,
    dead: BTreeSet<State>,
    out: Vec<Vec<Option<Vec<char>>>>,
}

impl Matcher<'_> {
    fn go(&mut self, pi: usize, si: usize, gi: usize) -> bool {
        if pi == self.pats.len() {
            self.out.push(self.binding.clone());
            return true;
        }
        let ground = &self.grounds[pi];
        if ground.len() - gi < self.min_rest[pi][si] {
            return false;
        }
        let key = (pi, si, gi, self.binding.clone());
        if self.dead.contains(&key) {
            return false;
        }
        let found = match self.pats[pi].get(si).copied() {
            None => gi == ground.len() && self.go(pi + 1, 0, 0),
            Some(Sym::T(c)) => ground.get(gi) == Some(&c) && self.go(pi, si + 1, gi + 1),
            Some(Sym::V(v)) => match self.binding[v].clone() {
                Some(val) => ground[gi..].starts_with(&val) && self.go(pi, si + 1, gi + val.len()),
                None => {
                    let mut any = false;
                    for end in gi..=ground.len() {
                        self.binding[v] = Some(ground[gi..end].to_vec());
                        any |= self.go(pi, si + 1, end);
                    }
                    self.binding[v] = None;
                    any
                }
            },
        };
        if !found {
            self.dead.insert(key);
        }
        found
    }
}

/// Every assignment of ground strings (possibly empty) to variables under
/// which `patterns[i]` spells `grounds[i]` for all `i` at once.
///
/// # Panics
/// If the slices differ in length.
pub fn match_all(patterns: &[&MetaString], grounds: &[&str]) -> Vec<BTreeMap<String, String>> {
    assert_eq!(patterns.len(), grounds.len(), "one ground string per pattern");
    let mut names: Vec<&str> = Vec::new();
    let mut pats = Vec::with_capacity(patterns.len());
    for p in patterns {
        let syms: Vec<Sym> = p
            .0
            .iter()
            .map(|s| match s {
                Symbol::Term(c) => Sym::T(*c),
                Symbol::Var(v) => Sym::V(match names.iter().position(|n| n == v) {
                    Some(i) => i,
                    None => {
                        names.push(v);
                        names.len() - 1
                    }
                }),
            })
            .collect();
        pats.push(syms);
    }
    let min_rest = pats
        .iter()
        .map(|p| {
            let mut rest = alloc::vec![0; p.len() + 1];
            for i in (0..p.len()).rev() {
                rest[i] = rest[i + 1] + usize::from(matches!(p[i], Sym::T(_)));
            }
            rest
        })
        .collect();
    let grounds: Vec<Vec<char>> = grounds.iter().map(|g| g.chars().collect()).collect();
    let mut m = Matcher {
        pats,
        min_rest,
        grounds: &grounds,
        binding: alloc::vec![None; names.len()],
        dead: BTreeSet::new(),
        out: Vec::new(),
    };
    m.go(0, 0, 0);
    m.out
        .into_iter()
        .map(|b| {
            names
                .iter()
                .zip(b)
                .map(|(n, v)| (String::from(*n), v.expect("every variable occurs, so it is bound").into_iter().collect()))
                .collect()
        })
        .collect()
}
