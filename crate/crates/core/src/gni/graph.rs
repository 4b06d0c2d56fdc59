use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside the vertex range")]
    OutOfRange(u32, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),
    #[error("mapping is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("permutation over {perm} vertices applied to a graph with {graph}")]
    SizeMismatch { perm: usize, graph: usize },
}

/// Simple undirected graph on vertices `0..n`. Edges are stored as `(u, v)`
/// with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;
    fn try_from(r: RawGraph) -> Result<Self, GraphError> {
        Graph::new(r.n, r.edges)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { n: g.n, edges: g.edges.into_iter().collect() }
    }
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::OutOfRange(u, v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Self { n, edges: set })
    }

    /// Add one edge, with the same validation as [`Graph::new`].
    pub fn with_edge(mut self, u: u32, v: u32) -> Result<Self, GraphError> {
        if u as usize >= self.n || v as usize >= self.n {
            return Err(GraphError::OutOfRange(u, v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.edges.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = alloc::vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }

    /// Degrees sorted descending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Row-major adjacency matrix.
    pub(crate) fn adjacency(&self) -> Vec<bool> {
        let mut m = alloc::vec![false; self.n * self.n];
        for &(u, v) in &self.edges {
            m[u as usize * self.n + v as usize] = true;
            m[v as usize * self.n + u as usize] = true;
        }
        m
    }
}

/// A bijection on `0..n`; vertex `i` maps to `mapping[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    mapping: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = GraphError;
    fn try_from(v: Vec<u32>) -> Result<Self, GraphError> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.mapping
    }
}

impl Permutation {
    pub fn new(mapping: Vec<u32>) -> Result<Self, GraphError> {
        let n = mapping.len();
        let mut seen = alloc::vec![false; n];
        for &m in &mapping {
            if m as usize >= n || seen[m as usize] {
                return Err(GraphError::NotBijection(n));
            }
            seen[m as usize] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self { mapping: (0..n as u32).collect() }
    }

    pub fn transposition(n: usize, a: u32, b: u32) -> Self {
        let mut p = Self::identity(n);
        p.mapping.swap(a as usize, b as usize);
        p
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.mapping[v as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.mapping
    }

    /// `self` after `first`: `v -> self(first(v))`.
    pub fn compose(&self, first: &Permutation) -> Permutation {
        Permutation { mapping: first.mapping.iter().map(|&v| self.mapping[v as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0; self.mapping.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m as usize] = i as u32;
        }
        Permutation { mapping: inv }
    }
}

/// Relabel: edge `{u, v}` becomes `{p(u), p(v)}`.
pub fn apply_permutation(g: &Graph, p: &Permutation) -> Result<Graph, GraphError> {
    if p.len() != g.n() {
        return Err(GraphError::SizeMismatch { perm: p.len(), graph: g.n() });
    }
    let edges = g.edges.iter().map(|&(u, v)| {
        let (a, b) = (p.apply(u), p.apply(v));
        (a.min(b), a.max(b))
    });
    Ok(Graph { n: g.n, edges: edges.collect() })
}
