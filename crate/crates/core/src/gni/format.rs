//! Edge-list text format: a header line `n m`, then `m` lines `u v` with
//! 0-indexed vertices. Blank lines and `#` comments are ignored.

use alloc::string::String;
use core::fmt::Write;

use super::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphParseError {
    #[error("empty graph file")]
    Empty,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn numbers(line: usize, text: &str) -> Result<(u64, u64), GraphParseError> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<u64, GraphParseError> {
        let tok = it.next().ok_or_else(|| GraphParseError::Syntax { line, msg: "expected two integers".into() })?;
        tok.parse().map_err(|_| GraphParseError::Syntax { line, msg: alloc::format!("`{tok}` is not a non-negative integer") })
    };
    let a = next()?;
    let b = next()?;
    if let Some(extra) = it.next() {
        return Err(GraphParseError::Syntax { line, msg: alloc::format!("unexpected `{extra}`") });
    }
    Ok((a, b))
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(GraphParseError::Empty)?;
    let (n, m) = numbers(hline, header)?;
    let mut g = Graph::new(n as usize, []).map_err(|source| GraphParseError::Graph { line: hline, source })?;
    let mut found = 0;
    for (line, l) in lines {
        let (u, v) = numbers(line, l)?;
        let (u, v) = (
            u32::try_from(u).map_err(|_| GraphParseError::Syntax { line, msg: "vertex index too large".into() })?,
            u32::try_from(v).map_err(|_| GraphParseError::Syntax { line, msg: "vertex index too large".into() })?,
        );
        g = g.with_edge(u, v).map_err(|source| GraphParseError::Graph { line, source })?;
        found += 1;
    }
    if found != m as usize {
        return Err(GraphParseError::EdgeCount { declared: m as usize, found });
    }
    Ok(g)
}

pub fn to_text(g: &Graph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// The shipped fixture pairs.
pub mod fixtures {
    use super::{parse_graph, Graph};

    fn load(text: &str) -> Graph {
        parse_graph(text).expect("shipped fixture parses")
    }

    /// 3-cube and Wagner graph: both 3-regular on 8 vertices. The cube is
    /// bipartite and the Wagner graph has 5-cycles, so they are not
    /// isomorphic.
    pub fn hard_pair() -> (Graph, Graph) {
        (load(include_str!("../../fixtures/gni/cube.graph")), load(include_str!("../../fixtures/gni/wagner.graph")))
    }

    /// A random 8-vertex graph and a hidden relabelling of it.
    pub fn isomorphic_pair() -> (Graph, Graph) {
        (load(include_str!("../../fixtures/gni/iso-a.graph")), load(include_str!("../../fixtures/gni/iso-b.graph")))
    }

    /// 8-cycle and 8-path: edge counts differ.
    pub fn trivial_pair() -> (Graph, Graph) {
        (load(include_str!("../../fixtures/gni/cycle8.graph")), load(include_str!("../../fixtures/gni/path8.graph")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let (g, _) = fixtures::hard_pair();
        assert_eq!(parse_graph(&to_text(&g)).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# triangle\n3 3\n\n0 1\n1 2 # last two\n2 0\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_graph("  \n"), Err(GraphParseError::Empty));
        assert!(matches!(parse_graph("3 1\n0 x\n"), Err(GraphParseError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph("3 1\n0 1 2\n"), Err(GraphParseError::Syntax { line: 2, .. })));
        assert_eq!(parse_graph("3 2\n0 1\n"), Err(GraphParseError::EdgeCount { declared: 2, found: 1 }));
        assert_eq!(
            parse_graph("3 1\n1 1\n"),
            Err(GraphParseError::Graph { line: 2, source: GraphError::SelfLoop(1) })
        );
        assert_eq!(
            parse_graph("3 2\n0 1\n1 0\n"),
            Err(GraphParseError::Graph { line: 3, source: GraphError::DuplicateEdge(1, 0) })
        );
        assert!(matches!(parse_graph("3 1\n0 3\n"), Err(GraphParseError::Graph { line: 2, .. })));
    }

    #[test]
    fn fixture_shapes() {
        let (a, b) = fixtures::hard_pair();
        assert_eq!(a.degree_sequence(), alloc::vec![3; 8]);
        assert_eq!(b.degree_sequence(), alloc::vec![3; 8]);
        let (a, b) = fixtures::trivial_pair();
        assert_ne!(a.edge_count(), b.edge_count());
        let (a, b) = fixtures::isomorphic_pair();
        assert!(crate::gni::find_isomorphism(&a, &b).is_some());
    }
}
