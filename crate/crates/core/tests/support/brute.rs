//! Naive P[k] enumerator used as an oracle for the real one.
//!
//! Works top-down by fixpoint: start from every axiom instance, then keep
//! applying every rule to every tuple of known trees until nothing new of
//! length at most `k` appears. Substitutions are found by trying every
//! assignment of substrings (including the empty string) of the premise
//! strings to the rule's variables. Shares no code with the library's
//! matcher or enumerator.

use std::collections::{BTreeMap, BTreeSet};

use hyperprobe_core::proof::{MetaString, ProofSystem, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tree {
    pub label: String,
    pub children: Vec<Tree>,
}

impl Tree {
    pub fn length(&self) -> usize {
        self.label.chars().count() + self.children.iter().map(Tree::length).sum::<usize>()
    }
}

fn subst(m: &MetaString, s: &BTreeMap<String, String>) -> Option<String> {
    let mut out = String::new();
    for sym in &m.0 {
        match sym {
            Symbol::Term(c) => out.push(*c),
            Symbol::Var(v) => out.push_str(s.get(v)?),
        }
    }
    Some(out)
}

fn vars(ms: &[&MetaString]) -> Vec<String> {
    let mut v = BTreeSet::new();
    for m in ms {
        for sym in &m.0 {
            if let Symbol::Var(x) = sym {
                v.insert(x.clone());
            }
        }
    }
    v.into_iter().collect()
}

fn substrings(strings: &[&str]) -> Vec<String> {
    let mut out = BTreeSet::new();
    out.insert(String::new());
    for s in strings {
        let cs: Vec<char> = s.chars().collect();
        for i in 0..cs.len() {
            for j in i + 1..=cs.len() {
                out.insert(cs[i..j].iter().collect());
            }
        }
    }
    out.into_iter().collect()
}

/// Every substitution of `names` drawn from `pool`.
fn assignments(names: &[String], pool: &[String], f: &mut dyn FnMut(&BTreeMap<String, String>)) {
    fn go(i: usize, names: &[String], pool: &[String], cur: &mut BTreeMap<String, String>, f: &mut dyn FnMut(&BTreeMap<String, String>)) {
        if i == names.len() {
            return f(cur);
        }
        for p in pool {
            cur.insert(names[i].clone(), p.clone());
            go(i + 1, names, pool, cur, f);
        }
        cur.remove(&names[i]);
    }
    go(0, names, pool, &mut BTreeMap::new(), f)
}

fn all_strings(sigma: &[char], max: usize) -> Vec<String> {
    let mut out = vec![];
    let mut layer = vec![String::new()];
    for _ in 0..max {
        layer = layer.iter().flat_map(|w| sigma.iter().map(move |c| format!("{w}{c}"))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn is_instance(pattern: &MetaString, w: &str) -> bool {
    let names = vars(&[pattern]);
    let pool = substrings(&[w]);
    let mut hit = false;
    assignments(&names, &pool, &mut |s| hit |= subst(pattern, s).as_deref() == Some(w));
    hit
}

fn tuples(trees: &[Tree], arity: usize, budget: usize) -> Vec<Vec<Tree>> {
    if arity == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for t in trees {
        let l = t.length();
        if l < budget {
            for mut rest in tuples(trees, arity - 1, budget - l) {
                rest.insert(0, t.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// All derivation trees of length at most `k`.
pub fn brute_force(ps: &ProofSystem, k: usize) -> BTreeSet<Tree> {
    let sigma: Vec<char> = ps.sigma().iter().copied().collect();
    let mut known: BTreeSet<Tree> = all_strings(&sigma, k)
        .into_iter()
        .filter(|w| ps.axioms().iter().any(|a| is_instance(a, w)))
        .map(|label| Tree { label, children: vec![] })
        .collect();
    loop {
        let current: Vec<Tree> = known.iter().cloned().collect();
        let mut fresh = vec![];
        for r in ps.rules() {
            let mut pats: Vec<&MetaString> = r.premises.iter().collect();
            pats.push(&r.conclusion);
            let names = vars(&pats);
            // The label itself needs at least one symbol.
            for kids in tuples(&current, r.premises.len(), k) {
                let labels: Vec<&str> = kids.iter().map(|t| t.label.as_str()).collect();
                let used: usize = kids.iter().map(Tree::length).sum();
                let pool = substrings(&labels);
                let mut conclusions = BTreeSet::new();
                assignments(&names, &pool, &mut |s| {
                    let ok = r.premises.iter().zip(&labels).all(|(p, l)| subst(p, s).as_deref() == Some(*l));
                    if ok {
                        if let Some(c) = subst(&r.conclusion, s) {
                            if !c.is_empty() && used + c.chars().count() <= k {
                                conclusions.insert(c);
                            }
                        }
                    }
                });
                for label in conclusions {
                    let t = Tree { label, children: kids.clone() };
                    if !known.contains(&t) {
                        fresh.push(t);
                    }
                }
            }
        }
        if fresh.is_empty() {
            return known;
        }
        known.extend(fresh);
    }
}
