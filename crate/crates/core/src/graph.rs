//! Ordered graph instances and the edge-adjacency relation.
//!
//! Vertices are `1..=n`, edges are `1..=m` in the order they appear in the
//! input; that order is load-bearing for the whole encoding, so it is never
//! normalized away.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Problem 1's assumed lower bound on the threshold.
pub const MIN_K: u32 = 2;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line {content:?} (expected two positive integers)")]
    MalformedLine { line: usize, content: String },
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: u32 },
    #[error("line {line}: self-loop {v} {v}")]
    SelfLoop { line: usize, v: u32 },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: u32, v: u32 },
    #[error("expected {expected} edges, found {found}")]
    EdgeCountMismatch { expected: u32, found: u32 },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph must have at least one edge")]
    NoEdges,
    #[error("graph must have at least two vertices")]
    TooFewVertices,
    #[error("threshold K = {k} is below the minimum of {MIN_K}")]
    KBelowMinimum { k: u32 },
}

/// An ordered, simple, loop-free undirected graph.
///
/// The position of an edge in `edges` defines its 1-based edge id; every
/// constraint family is expressed against that ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(u32, u32)>,
    name: Option<String>,
}

/// Construction-time knobs. Connectivity is a modelling assumption rather
/// than something the clauses consume, so it can be downgraded to a warning.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub allow_disconnected: bool,
}

impl Graph {
    /// Validates and builds a graph. Endpoint order within an edge is kept
    /// as given (it round-trips through serialization).
    pub fn new(n: u32, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        Self::with_options(n, edges, ParseOptions::default())
    }

    pub fn with_options(
        n: u32,
        edges: Vec<(u32, u32)>,
        opts: ParseOptions,
    ) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::TooFewVertices);
        }
        if edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut seen = BTreeSet::new();
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 2; // header occupies line 1
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(GraphError::VertexOutOfRange {
                        line,
                        vertex: w as u64,
                        n,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
        }
        let g = Graph {
            n,
            edges,
            name: None,
        };
        if !opts.allow_disconnected && !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of edges, `m`.
    pub fn m(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Endpoints of edge `x` (1-based).
    pub fn edge(&self, x: u32) -> (u32, u32) {
        self.edges[(x - 1) as usize]
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n as usize;
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v as usize);
            adj[v as usize].push(u as usize);
        }
        let mut seen = vec![false; n + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        let mut count = 0usize;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

/// The set of edge-id pairs `(x, y)` with `x < y` whose edges share a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacentEdgePairs {
    pairs: BTreeSet<(u32, u32)>,
}

impl AdjacentEdgePairs {
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.pairs.contains(&(x.min(y), x.max(y)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Computes every ordered pair of edge ids sharing a common vertex.
pub fn adjacent_pairs(g: &Graph) -> AdjacentEdgePairs {
    let mut incident = vec![Vec::new(); g.n() as usize + 1];
    for x in 1..=g.m() {
        let (u, v) = g.edge(x);
        incident[u as usize].push(x);
        incident[v as usize].push(x);
    }
    let mut pairs = BTreeSet::new();
    for edges_at_v in &incident {
        for (i, &x) in edges_at_v.iter().enumerate() {
            for &y in &edges_at_v[i + 1..] {
                pairs.insert((x.min(y), x.max(y)));
            }
        }
    }
    AdjacentEdgePairs { pairs }
}

/// A problem instance: graph plus the threshold `K >= 2`. `K > m` is legal;
/// the encoding of such an instance is trivially unsatisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: u32,
}

pub fn validate_instance(graph: Graph, k: u32) -> Result<Instance, GraphError> {
    if k < MIN_K {
        return Err(GraphError::KBelowMinimum { k });
    }
    Ok(Instance { graph, k })
}

/// Parses the edge-list document format: header `n m`, then `m` lines `u v`.
/// `#`-prefixed lines are comments, blank lines are skipped. Edge ids follow
/// the order of appearance.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    parse_graph_with(text, ParseOptions::default())
}

pub fn parse_graph_with(text: &str, opts: ParseOptions) -> Result<Graph, GraphError> {
    let mut name = None;
    let mut header: Option<(u32, u32)> = None;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(label) = rest.trim().strip_prefix("name:") {
                name = Some(label.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(GraphError::MalformedLine {
                line: line_no,
                content: line.to_string(),
            });
        }
        let a: u64 = fields[0].parse().map_err(|_| GraphError::MalformedLine {
            line: line_no,
            content: line.to_string(),
        })?;
        let b: u64 = fields[1].parse().map_err(|_| GraphError::MalformedLine {
            line: line_no,
            content: line.to_string(),
        })?;
        match header {
            None => {
                header = Some((a as u32, b as u32));
            }
            Some((n, _)) => {
                for w in [a, b] {
                    if w == 0 || w > n as u64 {
                        return Err(GraphError::VertexOutOfRange {
                            line: line_no,
                            vertex: w,
                            n,
                        });
                    }
                }
                edges.push((a as u32, b as u32));
                edge_lines.push(line_no);
            }
        }
    }

    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    if edges.len() as u32 != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len() as u32,
        });
    }
    // Re-run structural checks so diagnostics carry the real input line.
    let mut seen = BTreeSet::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        let line = edge_lines[i];
        if u == v {
            return Err(GraphError::SelfLoop { line, v: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
    }
    let mut g = Graph::with_options(n, edges, opts)?;
    if let Some(name) = name {
        g = g.with_name(name);
    }
    Ok(g)
}

/// Inverse of [`parse_graph`]: emits the edge-list document, preserving the
/// optional name as a comment.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    if let Some(name) = g.name() {
        let _ = writeln!(out, "# name: {name}");
    }
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn path(n: u32) -> Graph {
        let edges = (1..n).map(|i| (i, i + 1)).collect();
        Graph::new(n, edges).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn parse_path() {
        let g = parse_graph("4 3\n1 2\n2 3\n3 4").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), &[(1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn parse_triangle() {
        let g = parse_graph("3 3\n1 2\n2 3\n1 3").unwrap();
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn parse_rejects_self_loop_with_line() {
        let err = parse_graph("2 1\n1 1").unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { line: 2, v: 1 });
    }

    #[test]
    fn parse_rejects_duplicate_edge() {
        let err = parse_graph("3 3\n1 2\n2 3\n2 1").unwrap_err();
        assert_eq!(
            err,
            GraphError::DuplicateEdge {
                line: 4,
                u: 2,
                v: 1
            }
        );
    }

    #[test]
    fn parse_rejects_vertex_out_of_range() {
        let err = parse_graph("3 2\n1 2\n2 4").unwrap_err();
        assert!(matches!(
            err,
            GraphError::VertexOutOfRange {
                line: 3,
                vertex: 4,
                ..
            }
        ));
    }

    #[test]
    fn parse_rejects_malformed_line() {
        let err = parse_graph("3 2\n1 2\n2 x").unwrap_err();
        assert!(matches!(err, GraphError::MalformedLine { line: 3, .. }));
    }

    #[test]
    fn parse_rejects_disconnected() {
        let err = parse_graph("4 2\n1 2\n3 4").unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
        let g = parse_graph_with(
            "4 2\n1 2\n3 4",
            ParseOptions {
                allow_disconnected: true,
            },
        )
        .unwrap();
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn parse_rejects_edge_count_mismatch() {
        let err = parse_graph("3 3\n1 2\n2 3").unwrap_err();
        assert_eq!(
            err,
            GraphError::EdgeCountMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let g = parse_graph("# a path\n\n4 3\n1 2\n# middle\n2 3\n\n3 4\n").unwrap();
        assert_eq!(g.edges(), &[(1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn adjacent_pairs_path() {
        let pairs: Vec<_> = adjacent_pairs(&path(4)).iter().collect();
        assert_eq!(pairs, vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn adjacent_pairs_triangle() {
        let pairs: Vec<_> = adjacent_pairs(&triangle()).iter().collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn adjacent_pairs_star() {
        let star = Graph::new(4, vec![(1, 2), (1, 3), (1, 4)]).unwrap();
        let pairs: Vec<_> = adjacent_pairs(&star).iter().collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn validate_instance_bounds() {
        assert!(validate_instance(path(4), 2).is_ok());
        assert_eq!(
            validate_instance(path(4), 1).unwrap_err(),
            GraphError::KBelowMinimum { k: 1 }
        );
        // K > m is representable; the encoding must come out UNSAT.
        assert!(validate_instance(path(4), 5).is_ok());
    }

    #[test]
    fn pair_count_matches_degree_formula() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(2..=8u32);
            let g = random_connected(&mut rng, n);
            let expected: usize = (1..=n)
                .map(|v| {
                    let d = g.degree(v);
                    d * (d - 1) / 2
                })
                .sum();
            assert_eq!(adjacent_pairs(&g).len(), expected);
        }
    }

    #[test]
    fn serialize_parse_round_trip() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(2..=7u32);
            let g = random_connected(&mut rng, n).with_name("rt");
            let back = parse_graph(&serialize_graph(&g)).unwrap();
            assert_eq!(g, back);
        }
    }

    pub(crate) fn random_connected(rng: &mut impl rand::Rng, n: u32) -> Graph {
        use rand::seq::SliceRandom;
        // spanning tree first, then random extra edges
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for v in 2..=n {
            let u = rng.gen_range(1..v);
            edges.push((u, v));
        }
        for u in 1..=n {
            for v in u + 1..=n {
                if !edges.contains(&(u, v)) && !edges.contains(&(v, u)) && rng.gen_bool(0.3) {
                    edges.push((u, v));
                }
            }
        }
        edges.shuffle(rng);
        Graph::new(n, edges).unwrap()
    }
}
