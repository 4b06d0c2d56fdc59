use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use super::derivation::{ground_instances, Annotation, Derivation};
use super::matching::match_all;
use super::{instantiate, MetaString, ProofSystem};

/// Stored with every bounded decision.
pub const UNDECIDABILITY_NOTE: &str = "A proof found within the bound is checked and final. Finding none is \
inconclusive: if the provable strings form an undecidable set, no computable bound on proof length turns \
this search into a decision procedure.";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("more than {cap} derivations (stopped at {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("{0:?} is not an output symbol")]
    NotOverSigma0(char),
}

fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if parts == 0 {
        if total == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for first in 1..=total.saturating_sub(parts - 1) {
        cur.push(first);
        compositions(total - first, parts - 1, out, cur);
        cur.pop();
    }
}

/// All derivations of length at most `k`, shortest first, in a fixed order.
/// Fails once more than `cap` have been produced.
pub fn enumerate_derivations(ps: &ProofSystem, k: usize, cap: usize) -> Result<Vec<Derivation>, EnumerationError> {
    let sigma: Vec<char> = ps.sigma().iter().copied().collect();
    let mut by_len: Vec<Vec<Derivation>> = alloc::vec![Vec::new(); k + 1];
    let mut count = 0usize;
    let mut bump = |n: usize| -> Result<(), EnumerationError> {
        count += n;
        if count > cap {
            Err(EnumerationError::CapExceeded { cap, reached: count })
        } else {
            Ok(())
        }
    };

    for (len, slot) in by_len.iter_mut().enumerate().skip(1) {
        let mut leaves: BTreeMap<String, usize> = BTreeMap::new();
        for (i, a) in ps.axioms().iter().enumerate() {
            for s in ground_instances(a, len, &sigma) {
                leaves.entry(s).or_insert(i);
            }
        }
        bump(leaves.len())?;
        slot.extend(leaves.into_iter().map(|(label, i)| Derivation {
            label,
            children: Vec::new(),
            annotation: Annotation::Axiom(i),
        }));
    }

    let mut arities: Vec<usize> = ps.rules().iter().map(|r| r.premises.len()).collect();
    arities.sort_unstable();
    arities.dedup();

    // Once every derivation of length at most `s` is known, all child tuples
    // of total length `s` can be combined. Their parents are strictly longer.
    for s in 1..k {
        for &arity in arities.iter().filter(|&&a| a <= s) {
            let mut shapes = Vec::new();
            compositions(s, arity, &mut shapes, &mut Vec::new());
            for shape in shapes {
                let pools: Vec<&[Derivation]> = shape.iter().map(|&l| by_len[l].as_slice()).collect();
                if pools.iter().any(|p| p.is_empty()) {
                    continue;
                }
                let mut produced: Vec<(usize, Derivation)> = Vec::new();
                let mut idx = alloc::vec![0usize; arity];
                'tuples: loop {
                    let children: Vec<&Derivation> = idx.iter().zip(&pools).map(|(&i, p)| &p[i]).collect();
                    let labels: Vec<&str> = children.iter().map(|c| c.label.as_str()).collect();
                    let mut parents: BTreeMap<String, usize> = BTreeMap::new();
                    for (ri, r) in ps.rules().iter().enumerate().filter(|(_, r)| r.premises.len() == arity) {
                        let pats: Vec<&MetaString> = r.premises.iter().collect();
                        for sub in match_all(&pats, &labels) {
                            let sub = sub.into_iter().map(|(v, g)| (v, MetaString::ground(&g))).collect();
                            let c = instantiate(&r.conclusion, &sub).as_ground().expect("conclusion variables are bound");
                            let n = c.chars().count();
                            if n > 0 && s + n <= k {
                                parents.entry(c).or_insert(ri);
                            }
                        }
                    }
                    bump(parents.len())?;
                    for (label, ri) in parents {
                        let n = label.chars().count();
                        let node = Derivation {
                            label,
                            children: children.iter().map(|&c| c.clone()).collect(),
                            annotation: Annotation::Rule(ri),
                        };
                        produced.push((s + n, node));
                    }
                    // Next tuple, odometer style.
                    for pos in (0..arity).rev() {
                        idx[pos] += 1;
                        if idx[pos] < pools[pos].len() {
                            continue 'tuples;
                        }
                        idx[pos] = 0;
                    }
                    break;
                }
                for (len, node) in produced {
                    by_len[len].push(node);
                }
            }
        }
    }
    Ok(by_len
        .into_iter()
        .flat_map(|mut v| {
            v.sort();
            v
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    /// A shortest derivation of the string within the bound.
    Provable { bound: usize, derivation: Derivation },
    NoProofWithinBound { bound: usize },
}

/// Search all derivations of length at most `g(|x|)` for one ending in `x`.
pub fn bounded_decide(
    ps: &ProofSystem,
    x: &str,
    g: impl Fn(usize) -> usize,
    cap: usize,
) -> Result<Decision, EnumerationError> {
    if let Some(c) = x.chars().find(|c| !ps.sigma0().contains(c)) {
        return Err(EnumerationError::NotOverSigma0(c));
    }
    let bound = g(x.chars().count());
    let all = enumerate_derivations(ps, bound, cap)?;
    Ok(match all.into_iter().find(|d| d.label == x) {
        Some(derivation) => Decision::Provable { bound, derivation },
        None => Decision::NoProofWithinBound { bound },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_derivation, parse_proof_system, toy};
    use alloc::collections::BTreeSet;

    fn counts(ps: &ProofSystem, k: usize) -> Vec<usize> {
        let all = enumerate_derivations(ps, k, 1_000_000).unwrap();
        (1..=k).map(|j| all.iter().filter(|d| d.length() <= j).count()).collect()
    }

    #[test]
    fn axiom_only() {
        let ps = parse_proof_system("SIGMA\na\nSIGMA0\na\nAXIOMS\na\n").unwrap();
        assert_eq!(enumerate_derivations(&ps, 1, 10).unwrap().len(), 1);
        assert!(enumerate_derivations(&ps, 0, 10).unwrap().is_empty());
    }

    #[test]
    fn hand_counts() {
        assert_eq!(counts(&toy::duplication(), 8), [1, 1, 2, 2, 2, 4, 5, 5]);
        assert_eq!(counts(&toy::unary_addition(), 8), [0, 1, 1, 1, 1, 3, 3, 3]);
    }

    #[test]
    fn every_result_checks_and_is_unique() {
        for ps in [toy::duplication(), toy::unary_addition()] {
            let all = enumerate_derivations(&ps, 10, 1_000_000).unwrap();
            let set: BTreeSet<&Derivation> = all.iter().collect();
            assert_eq!(set.len(), all.len());
            for d in &all {
                assert!(check_derivation(&ps, d), "{d}");
                assert!(d.length() <= 10);
            }
        }
    }

    #[test]
    fn monotone_in_k() {
        let ps = toy::duplication();
        let mut prev: BTreeSet<Derivation> = BTreeSet::new();
        for k in 1..=10 {
            let now: BTreeSet<Derivation> = enumerate_derivations(&ps, k, 1_000_000).unwrap().into_iter().collect();
            assert!(prev.is_subset(&now));
            prev = now;
        }
    }

    #[test]
    fn cap_is_reported() {
        let err = enumerate_derivations(&toy::duplication(), 8, 3).unwrap_err();
        assert!(matches!(err, EnumerationError::CapExceeded { cap: 3, reached } if reached > 3));
    }

    #[test]
    fn decide() {
        let ps = toy::duplication();
        let Decision::Provable { bound, derivation } = bounded_decide(&ps, "aa", |n| n * n, 10_000).unwrap() else {
            panic!()
        };
        assert_eq!(bound, 4);
        assert_eq!(derivation.label, "aa");
        assert_eq!(derivation.length(), 3);
        assert!(check_derivation(&ps, &derivation));
        assert_eq!(bounded_decide(&ps, "b", |n| 10 * n, 10_000).unwrap(), Decision::NoProofWithinBound { bound: 10 });
        assert_eq!(bounded_decide(&ps, "aaa", |_| 1, 10_000).unwrap(), Decision::NoProofWithinBound { bound: 1 });
        assert_eq!(bounded_decide(&ps, "ac", |n| n, 10), Err(EnumerationError::NotOverSigma0('c')));
    }
}
