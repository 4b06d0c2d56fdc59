use alloc::vec::Vec;

use super::graph::{apply_permutation, Graph, Permutation};

/// Per-vertex invariant: degree, then the sorted degrees of its neighbours.
fn invariants(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    let deg = g.degrees();
    let adj = g.adjacency();
    let n = g.n();
    (0..n)
        .map(|u| {
            let mut nd: Vec<usize> = (0..n).filter(|&v| adj[u * n + v]).map(|v| deg[v]).collect();
            nd.sort_unstable();
            (deg[u], nd)
        })
        .collect()
}

/// Visit order: highest degree first, then always the vertex with the most
/// already-ordered neighbours, so adjacency checks prune early.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let adj = g.adjacency();
    let deg = g.degrees();
    let mut placed = alloc::vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&u| !placed[u])
            .max_by_key(|&u| {
                let links = order.iter().filter(|&&w: &&usize| adj[u * n + w]).count();
                (links, deg[u], core::cmp::Reverse(u))
            })
            .expect("an unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Search<'a> {
    n: usize,
    adj1: &'a [bool],
    adj2: &'a [bool],
    inv1: &'a [(usize, Vec<usize>)],
    inv2: &'a [(usize, Vec<usize>)],
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.n {
            return true;
        }
        let u = self.order[depth];
        for v in 0..self.n {
            if self.used[v] || self.inv1[u] != self.inv2[v] {
                continue;
            }
            self.nodes += 1;
            let consistent = self.order[..depth]
                .iter()
                .all(|&w| self.adj1[u * self.n + w] == self.adj2[v * self.n + self.map[w]]);
            if !consistent {
                continue;
            }
            self.map[u] = v;
            self.used[v] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[v] = false;
        }
        false
    }
}

/// A permutation `p` with `apply_permutation(g1, p) == g2`, if one exists.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Permutation> {
    find_isomorphism_counted(g1, g2).0
}

/// As [`find_isomorphism`], also returning the number of candidate
/// assignments examined.
pub fn find_isomorphism_counted(g1: &Graph, g2: &Graph) -> (Option<Permutation>, u64) {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() || g1.degree_sequence() != g2.degree_sequence() {
        return (None, 0);
    }
    let inv1 = invariants(g1);
    let inv2 = invariants(g2);
    let mut a: Vec<_> = inv1.clone();
    let mut b: Vec<_> = inv2.clone();
    a.sort();
    b.sort();
    if a != b {
        return (None, 0);
    }
    let n = g1.n();
    let (adj1, adj2) = (g1.adjacency(), g2.adjacency());
    let order = search_order(g1);
    let mut s = Search {
        n,
        adj1: &adj1,
        adj2: &adj2,
        inv1: &inv1,
        inv2: &inv2,
        order: &order,
        map: alloc::vec![0; n],
        used: alloc::vec![false; n],
        nodes: 0,
    };
    if s.extend(0) {
        let p = Permutation::new(s.map.iter().map(|&v| v as u32).collect()).expect("search builds a bijection");
        (Some(p), s.nodes)
    } else {
        (None, s.nodes)
    }
}

/// Polynomial-time certificate check: does `p` map `g1` exactly onto `g2`?
/// A permutation of the wrong size is rejected.
pub fn verify_isomorphism_cert(g1: &Graph, g2: &Graph, p: &Permutation) -> bool {
    g1.n() == g2.n() && apply_permutation(g1, p).is_ok_and(|h| h == *g2)
}
