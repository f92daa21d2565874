//! Simple undirected graphs, vertex subsets and the three text formats
//! (graph6, edge list, 0/1 adjacency matrix).
//!
//! Vertex indices are 0-based in this API except where a function name says
//! otherwise; the text formats and `VertexSet::from_one_based` use 1-based
//! labels `v1..vn`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{ExactMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("malformed graph6 header")]
    MalformedHeader,
    #[error("graph6 body is truncated")]
    TruncatedBody,
    #[error("unexpected data after graph6 body")]
    TrailingGarbage,
    #[error("not an adjacency matrix: {0}")]
    NotAdjacency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, neighbors: vec![Vec::new(); n] }
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            neighbors: (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect(),
        }
    }

    /// Builds a graph from 1-based vertex pairs.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut zero_based = Vec::with_capacity(edges.len());
        for &(i, j) in edges {
            for idx in [i, j] {
                if idx == 0 || idx > n {
                    return Err(GraphError::IndexOutOfRange { index: idx, n });
                }
            }
            zero_based.push((i - 1, j - 1));
        }
        Graph::from_edges(n, &zero_based).map_err(|e| match e {
            GraphError::LoopEdge(v) => GraphError::LoopEdge(v + 1),
            GraphError::DuplicateEdge(a, b) => GraphError::DuplicateEdge(a + 1, b + 1),
            other => other,
        })
    }

    /// Builds a graph from 0-based vertex pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(GraphError::IndexOutOfRange { index: i.max(j), n });
            }
            if i == j {
                return Err(GraphError::LoopEdge(i));
            }
            if g.neighbors[i].contains(&j) {
                return Err(GraphError::DuplicateEdge(i.min(j), i.max(j)));
            }
            g.neighbors[i].push(j);
            g.neighbors[j].push(i);
        }
        for list in &mut g.neighbors {
            list.sort_unstable();
        }
        Ok(g)
    }

    /// Accepts only symmetric 0/1 matrices with zero diagonal.
    pub fn from_adjacency(a: &ExactMatrix) -> Result<Self, GraphError> {
        if !a.is_square() {
            return Err(GraphError::NotAdjacency(format!("{}x{} is not square", a.rows(), a.cols())));
        }
        let n = a.rows();
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in 0..n {
                let x = a.get(i, j);
                if !(x.is_zero() || x.is_one()) {
                    return Err(GraphError::NotAdjacency(format!("entry ({i}, {j}) = {x}")));
                }
                if x != a.get(j, i) {
                    return Err(GraphError::NotAdjacency(format!("asymmetric at ({i}, {j})")));
                }
                if x.is_one() {
                    if i == j {
                        return Err(GraphError::NotAdjacency(format!("nonzero diagonal at {i}")));
                    }
                    g.neighbors[i].push(j);
                }
            }
        }
        Ok(g)
    }

    /// Builds a graph from a row-major boolean adjacency relation.
    pub fn from_bool_matrix(adj: &[Vec<bool>]) -> Result<Self, GraphError> {
        let n = adj.len();
        let m = ExactMatrix::from_fn(n, n, |i, j| {
            if adj[i][j] {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        Graph::from_adjacency(&m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// Edges as 0-based pairs `(i, j)` with `i < j`, lexicographically ordered.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| self.neighbors[i].iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degree_sequence().iter().sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> String {
        format!("v{}", v + 1)
    }

    pub fn adjacency_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.n, self.n, |i, j| {
            if self.has_edge(i, j) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// The graph `G^g`: vertex `v` is renamed `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut neighbors = vec![Vec::new(); self.n];
        for (v, list) in self.neighbors.iter().enumerate() {
            neighbors[perm[v]] = list.iter().map(|&u| perm[u]).collect();
            neighbors[perm[v]].sort_unstable();
        }
        Graph { n: self.n, neighbors }
    }

    pub fn complement(&self) -> Graph {
        Graph {
            n: self.n,
            neighbors: (0..self.n)
                .map(|v| (0..self.n).filter(|&u| u != v && !self.has_edge(u, v)).collect())
                .collect(),
        }
    }

    /// Standard graph6 encoding (no `>>graph6<<` prefix, no newline).
    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        let n = self.n;
        if n <= 62 {
            out.push(n as u8 + 63);
        } else if n <= 258_047 {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            out.extend([126, 126]);
            for shift in [30, 24, 18, 12, 6, 0] {
                out.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut chunk = 0u8;
        let mut filled = 0;
        for j in 1..n {
            for i in 0..j {
                chunk = (chunk << 1) | u8::from(self.has_edge(i, j));
                filled += 1;
                if filled == 6 {
                    out.push(chunk + 63);
                    chunk = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push((chunk << (6 - filled)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are printable ASCII")
    }

    /// Parses one graph6 record. An optional `>>graph6<<` prefix and a single
    /// trailing line terminator are accepted.
    pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
        let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
        let text = text.strip_suffix('\n').unwrap_or(text);
        let text = text.strip_suffix('\r').unwrap_or(text);
        let bytes = text.as_bytes();
        if bytes.is_empty() || bytes.iter().any(|&b| !(63..=126).contains(&b)) {
            return Err(GraphError::MalformedHeader);
        }
        let (n, body) = if bytes[0] != 126 {
            (usize::from(bytes[0] - 63), &bytes[1..])
        } else if bytes.len() >= 2 && bytes[1] != 126 {
            if bytes.len() < 4 {
                return Err(GraphError::MalformedHeader);
            }
            (decode_size(&bytes[1..4]), &bytes[4..])
        } else {
            if bytes.len() < 8 {
                return Err(GraphError::MalformedHeader);
            }
            (decode_size(&bytes[2..8]), &bytes[8..])
        };
        let bits = n * n.saturating_sub(1) / 2;
        let needed = bits.div_ceil(6);
        if body.len() < needed {
            return Err(GraphError::TruncatedBody);
        }
        if body.len() > needed {
            return Err(GraphError::TrailingGarbage);
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                let byte = body[k / 6] - 63;
                if (byte >> (5 - k % 6)) & 1 == 1 {
                    edges.push((i, j));
                }
                k += 1;
            }
        }
        if bits % 6 != 0 && (body[needed - 1] - 63) & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(GraphError::TrailingGarbage);
        }
        Graph::from_edges(n, &edges)
    }

    /// Edge-list text: header `n m`, then `m` lines `i j` with 1-based indices.
    /// Blank lines and `#` comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = content_lines(text);
        let header = lines.next().ok_or_else(|| GraphError::Parse("missing `n m` header".into()))?;
        let nums = parse_usizes(header)?;
        let [n, m] = nums[..] else {
            return Err(GraphError::Parse(format!("header must be `n m`, got `{header}`")));
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let pair = parse_usizes(line)?;
            let [i, j] = pair[..] else {
                return Err(GraphError::Parse(format!("edge line must be `i j`, got `{line}`")));
            };
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(GraphError::Parse(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::from_edge_list(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n, edges.len());
        for (i, j) in edges {
            s.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        s
    }

    /// Adjacency-matrix text: `n` lines of `n` whitespace-separated 0/1 tokens.
    pub fn parse_adjacency_text(text: &str) -> Result<Graph, GraphError> {
        let rows: Vec<Vec<bool>> = content_lines(text)
            .map(|line| {
                line.split_whitespace()
                    .map(|t| match t {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(GraphError::Parse(format!("expected 0 or 1, got `{t}`"))),
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(GraphError::Parse(format!("row {} has {} entries, expected {n}", bad + 1, rows[bad].len())));
        }
        Graph::from_bool_matrix(&rows)
    }

    pub fn to_adjacency_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n).map(|j| if self.has_edge(i, j) { "1" } else { "0" }).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, {:?})", self.to_graph6(), self.edges())
    }
}

fn decode_size(bytes: &[u8]) -> usize {
    bytes.iter().fold(0, |acc, &b| (acc << 6) | usize::from(b - 63))
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

fn parse_usizes(line: &str) -> Result<Vec<usize>, GraphError> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| GraphError::Parse(format!("bad integer `{t}`"))))
        .collect()
}

/// A subset of the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    n: usize,
    members: Vec<usize>,
}

impl VertexSet {
    pub fn all(n: usize) -> Self {
        VertexSet { n, members: (0..n).collect() }
    }

    /// Members given as 0-based indices; duplicates are merged.
    pub fn from_members(n: usize, members: &[usize]) -> Result<Self, GraphError> {
        let mut m = members.to_vec();
        if let Some(&bad) = m.iter().find(|&&v| v >= n) {
            return Err(GraphError::IndexOutOfRange { index: bad + 1, n });
        }
        m.sort_unstable();
        m.dedup();
        Ok(VertexSet { n, members: m })
    }

    /// Members given as 1-based labels.
    pub fn from_one_based(n: usize, labels: &[usize]) -> Result<Self, GraphError> {
        if let Some(&bad) = labels.iter().find(|&&v| v == 0 || v > n) {
            return Err(GraphError::IndexOutOfRange { index: bad, n });
        }
        let zero: Vec<usize> = labels.iter().map(|v| v - 1).collect();
        VertexSet::from_members(n, &zero)
    }

    /// Reads a set back from a characteristic 0/1 vector.
    pub fn from_characteristic(v: &[Rational]) -> Option<Self> {
        let mut members = Vec::new();
        for (i, x) in v.iter().enumerate() {
            if x.is_one() {
                members.push(i);
            } else if !x.is_zero() {
                return None;
            }
        }
        Some(VertexSet { n: v.len(), members })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_all(&self) -> bool {
        self.members.len() == self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn characteristic(&self) -> Vec<Rational> {
        (0..self.n)
            .map(|v| if self.contains(v) { Rational::one() } else { Rational::zero() })
            .collect()
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| !other.contains(v))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut m = self.members.clone();
        m.extend_from_slice(&other.members);
        m.sort_unstable();
        m.dedup();
        VertexSet { n: self.n.max(other.n), members: m }
    }

    /// Image of the set under a vertex permutation.
    pub fn map(&self, perm: &[usize]) -> VertexSet {
        let mut m: Vec<usize> = self.members.iter().map(|&v| perm[v]).collect();
        m.sort_unstable();
        VertexSet { n: self.n, members: m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig31() -> Graph {
        Graph::from_edge_list(4, &[(1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn fig31_adjacency() {
        let expected = ExactMatrix::from_i64_rows(&[[0, 1, 0, 0], [1, 0, 1, 1], [0, 1, 0, 1], [0, 1, 1, 0]]);
        assert_eq!(fig31().adjacency_matrix(), expected);
        assert_eq!(Graph::from_adjacency(&expected).unwrap(), fig31());
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(Graph::from_edge_list(3, &[]).unwrap().adjacency_matrix(), ExactMatrix::zeros(3, 3));
        assert_eq!(Graph::from_edge_list(2, &[(1, 1)]), Err(GraphError::LoopEdge(1)));
        assert_eq!(Graph::from_edge_list(3, &[(1, 2), (2, 1)]), Err(GraphError::DuplicateEdge(1, 2)));
        assert_eq!(
            Graph::from_edge_list(3, &[(1, 4)]),
            Err(GraphError::IndexOutOfRange { index: 4, n: 3 })
        );
    }

    #[test]
    fn degrees_and_edges() {
        assert_eq!(fig31().degree_sequence(), vec![1, 3, 2, 2]);
        assert_eq!(fig31().edge_count(), 4);
        assert_eq!(Graph::empty(5).degree_sequence(), vec![0; 5]);
        assert_eq!(Graph::empty(5).edge_count(), 0);
        assert_eq!(Graph::complete(4).degree_sequence(), vec![3; 4]);
    }

    #[test]
    fn graph6_complete_k4() {
        let g = Graph::parse_graph6("C~").unwrap();
        assert_eq!(g, Graph::complete(4));
        assert_eq!(g.edge_count(), 6);
        assert_eq!(Graph::complete(4).to_graph6(), "C~");
    }

    #[test]
    fn graph6_known_strings() {
        // path 1-2-3 and the empty / single vertex graphs
        let p3 = Graph::from_edge_list(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(p3.to_graph6(), "Bg");
        assert_eq!(Graph::empty(0).to_graph6(), "?");
        assert_eq!(Graph::empty(1).to_graph6(), "@");
        assert_eq!(Graph::parse_graph6(">>graph6<<Bg\n").unwrap(), p3);
    }

    #[test]
    fn graph6_errors() {
        assert_eq!(Graph::parse_graph6(""), Err(GraphError::MalformedHeader));
        assert_eq!(Graph::parse_graph6("C"), Err(GraphError::TruncatedBody));
        assert_eq!(Graph::parse_graph6("C~~"), Err(GraphError::TrailingGarbage));
        assert_eq!(Graph::parse_graph6("~?"), Err(GraphError::MalformedHeader));
        assert_eq!(Graph::parse_graph6("B\u{7f}"), Err(GraphError::MalformedHeader));
        // padding bits must be zero
        assert_eq!(Graph::parse_graph6("Bh"), Err(GraphError::TrailingGarbage));
    }

    #[test]
    fn graph6_large_header() {
        let g = Graph::from_edges(70, &[(0, 69), (3, 4)]).unwrap();
        let s = g.to_graph6();
        assert!(s.starts_with('~'));
        assert_eq!(Graph::parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn text_formats() {
        let g = fig31();
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert_eq!(Graph::parse_adjacency_text(&g.to_adjacency_text()).unwrap(), g);
        let with_comments = "# fig\n4 4\n1 2\n2 3 # middle\n2 4\n\n3 4\n";
        assert_eq!(Graph::parse_edge_list(with_comments).unwrap(), g);
        assert!(Graph::parse_edge_list("4 5\n1 2\n").is_err());
        assert!(Graph::parse_adjacency_text("0 1\n0 0\n").is_err());
        assert!(Graph::parse_adjacency_text("0 2\n2 0\n").is_err());
        assert!(Graph::parse_adjacency_text("1 0\n0 0\n").is_err());
    }

    #[test]
    fn vertex_sets() {
        let s = VertexSet::from_one_based(4, &[3, 1, 3]).unwrap();
        assert_eq!(s.members(), &[0, 2]);
        assert_eq!(s.one_based(), vec![1, 3]);
        assert_eq!(
            VertexSet::from_characteristic(&s.characteristic()).unwrap(),
            s
        );
        assert!(VertexSet::from_one_based(4, &[0]).is_err());
        assert!(VertexSet::from_one_based(4, &[5]).is_err());
        let t = VertexSet::from_one_based(4, &[2]).unwrap();
        assert!(s.is_disjoint(&t));
        assert_eq!(s.union(&t).one_based(), vec![1, 2, 3]);
        assert!(VertexSet::all(4).is_all());
    }

    #[test]
    fn relabel_moves_edges() {
        let g = fig31();
        // swap v3 and v4: an automorphism
        assert_eq!(g.relabel(&[0, 1, 3, 2]), g);
        let h = g.relabel(&[3, 2, 1, 0]);
        assert!(h.has_edge(3, 2));
        assert_eq!(h.edge_count(), 4);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn graph6_round_trip(g in arb_graph(12)) {
            let s = g.to_graph6();
            prop_assert_eq!(Graph::parse_graph6(&s).unwrap(), g.clone());
            prop_assert_eq!(Graph::parse_graph6(&s).unwrap().to_graph6(), s);
        }

        #[test]
        fn degree_sum_is_twice_edges(g in arb_graph(12)) {
            prop_assert_eq!(g.degree_sequence().iter().sum::<usize>(), 2 * g.edge_count());
        }
    }
}
