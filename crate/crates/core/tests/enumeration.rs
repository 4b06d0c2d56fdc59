mod support {
    pub mod brute;
}

use hyperprobe_core::proof::{check_derivation, enumerate_derivations, parse_proof_system, toy, Derivation, ProofSystem};
use support::brute::{brute_force, Tree};

fn tree(d: &Derivation) -> Tree {
    Tree { label: d.label.clone(), children: d.children.iter().map(tree).collect() }
}

fn agree(ps: &ProofSystem, k: usize) {
    let fast = enumerate_derivations(ps, k, 1_000_000).unwrap();
    assert!(fast.iter().all(|d| check_derivation(ps, d)));
    let fast_trees: std::collections::BTreeSet<Tree> = fast.iter().map(tree).collect();
    assert_eq!(fast_trees.len(), fast.len(), "duplicate derivations at k={k}");
    assert_eq!(fast_trees, brute_force(ps, k), "k={k}");
}

#[test]
fn duplication_matches_brute_force() {
    let ps = toy::duplication();
    for k in 0..=8 {
        agree(&ps, k);
    }
}

#[test]
fn unary_addition_matches_brute_force() {
    let ps = toy::unary_addition();
    for k in 0..=8 {
        agree(&ps, k);
    }
}

#[test]
fn hand_counted_sizes() {
    let sizes = |ps: &ProofSystem| (1..=8).map(|k| brute_force(ps, k).len()).collect::<Vec<_>>();
    assert_eq!(sizes(&toy::duplication()), [1, 1, 2, 2, 2, 4, 5, 5]);
    assert_eq!(sizes(&toy::unary_addition()), [0, 1, 1, 1, 1, 3, 3, 3]);
}

#[test]
fn repeated_variables_and_empty_bindings() {
    // `?x ?x` forces equal halves; `?x b ?y` lets either side be empty.
    let ps = parse_proof_system("SIGMA\na b\nSIGMA0\na b\nAXIOMS\nb\nab\nRULES\n?x => ?x ?x\n?x b ?y => a ?x b ?y\n?x, ?x => ?x a\n").unwrap();
    for k in 0..=7 {
        agree(&ps, k);
    }
    assert!(brute_force(&ps, 7).len() > 10);
}
