//! Undirected simple graphs over dense integer node ids.
//!
//! Adjacency lists are kept sorted so that common-neighbor queries run in
//! `O(min degree)` and iteration order is deterministic, which matters for
//! reproducible tie-breaking in the heuristics built on top.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

/// Index of a node, dense in `[0, n)`.
pub type NodeId = usize;

/// An unordered node pair, stored normalized so that `a < b`.
///
/// Self-loops are not representable; construction panics on `a == b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    a: NodeId,
    b: NodeId,
}

impl Edge {
    /// Normalizing constructor. Panics if `a == b`.
    pub fn new(a: NodeId, b: NodeId) -> Self {
        assert!(a != b, "self-loop ({a},{a}) is not a valid edge");
        if a < b {
            Edge { a, b }
        } else {
            Edge { a: b, b: a }
        }
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }

    pub fn smaller(&self) -> NodeId {
        self.a
    }

    pub fn larger(&self) -> NodeId {
        self.b
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(&self, v: NodeId) -> NodeId {
        if v == self.a {
            self.b
        } else if v == self.b {
            self.a
        } else {
            panic!("node {v} is not an endpoint of ({},{})", self.a, self.b)
        }
    }

    pub fn touches(&self, v: NodeId) -> bool {
        self.a == v || self.b == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node id {0} out of range (graph has {1} nodes)")]
    NodeOutOfRange(NodeId, usize),
    #[error("edge {0} already present")]
    DuplicateEdge(Edge),
    #[error("edge {0} not present")]
    MissingEdge(Edge),
}

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected two whitespace-separated tokens, got {found}")]
    Malformed { line: usize, found: usize },
    #[error("line {line}: self-loop on node '{token}'")]
    SelfLoop { line: usize, token: String },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
}

/// An undirected simple graph with per-node sorted adjacency lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    /// An edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        let (a, b) = e.endpoints();
        a < self.node_count()
            && b < self.node_count()
            && self.adjacency[a].binary_search(&b).is_ok()
    }

    fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v >= self.node_count() {
            Err(GraphError::NodeOutOfRange(v, self.node_count()))
        } else {
            Ok(())
        }
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        let (a, b) = e.endpoints();
        self.check_node(a)?;
        self.check_node(b)?;
        let pos = match self.adjacency[a].binary_search(&b) {
            Ok(_) => return Err(GraphError::DuplicateEdge(e)),
            Err(pos) => pos,
        };
        self.adjacency[a].insert(pos, b);
        let pos = self.adjacency[b].binary_search(&a).unwrap_err();
        self.adjacency[b].insert(pos, a);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        let (a, b) = e.endpoints();
        self.check_node(a)?;
        self.check_node(b)?;
        let pos = self.adjacency[a]
            .binary_search(&b)
            .map_err(|_| GraphError::MissingEdge(e))?;
        self.adjacency[a].remove(pos);
        let pos = self.adjacency[b].binary_search(&a).unwrap();
        self.adjacency[b].remove(pos);
        self.edge_count -= 1;
        Ok(())
    }

    /// `N(v) ∩ N(w)` by merging the two sorted adjacency lists.
    pub fn common_neighbors(&self, v: NodeId, w: NodeId) -> Vec<NodeId> {
        assert!(v != w, "common_neighbors needs two distinct nodes");
        let (mut xs, mut ys) = (self.adjacency[v].iter(), self.adjacency[w].iter());
        let mut out = Vec::new();
        let (mut x, mut y) = (xs.next(), ys.next());
        while let (Some(&u), Some(&t)) = (x, y) {
            match u.cmp(&t) {
                std::cmp::Ordering::Less => x = xs.next(),
                std::cmp::Ordering::Greater => y = ys.next(),
                std::cmp::Ordering::Equal => {
                    out.push(u);
                    x = xs.next();
                    y = ys.next();
                }
            }
        }
        out
    }

    pub fn common_neighbor_count(&self, v: NodeId, w: NodeId) -> usize {
        self.common_neighbors(v, w).len()
    }

    /// All unordered pairs not in `E`, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.node_count();
        (0..n).flat_map(move |a| {
            (a + 1..n).filter_map(move |b| {
                if self.adjacency[a].binary_search(&b).is_err() {
                    Some(Edge { a, b })
                } else {
                    None
                }
            })
        })
    }

    pub fn non_edge_count(&self) -> usize {
        let n = self.node_count();
        n * (n - 1) / 2 - self.edge_count
    }

    /// All edges, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, nbrs)| {
            nbrs.iter()
                .filter(move |&&b| b > a)
                .map(move |&b| Edge { a, b })
        })
    }

    /// Full structural audit: sorted symmetric adjacency, no self-loops,
    /// consistent edge count. O(n + m); used by tests, not per mutation.
    #[cfg(test)]
    pub(crate) fn check_invariants(&self) -> bool {
        let mut total = 0;
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            total += nbrs.len();
            let sorted = nbrs.windows(2).all(|w| w[0] < w[1]);
            if !sorted || nbrs.contains(&v) {
                return false;
            }
            for &w in nbrs {
                if self.adjacency[w].binary_search(&v).is_err() {
                    return false;
                }
            }
        }
        total == 2 * self.edge_count
    }
}

/// A graph loaded from an edge-list file, together with the original node
/// labels in first-seen order (dense id `i` had label `labels[i]`).
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub labels: Vec<String>,
}

/// Parse an edge-list file: one edge per line, two whitespace-separated
/// tokens, `#` comments and blank lines ignored. Node labels may be arbitrary
/// strings; a dense relabeling table is built in first-seen order.
pub fn load_edge_list(path: &Path) -> Result<LoadedGraph, EdgeListError> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut pairs: Vec<(usize, NodeId, NodeId)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(EdgeListError::Malformed {
                line: line_no,
                found: tokens.len(),
            });
        }
        if tokens[0] == tokens[1] {
            return Err(EdgeListError::SelfLoop {
                line: line_no,
                token: tokens[0].to_string(),
            });
        }
        let mut intern = |tok: &str| -> NodeId {
            *ids.entry(tok.to_string()).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            })
        };
        let a = intern(tokens[0]);
        let b = intern(tokens[1]);
        pairs.push((line_no, a, b));
    }
    let mut graph = Graph::new(labels.len());
    for (line_no, a, b) in pairs {
        graph
            .add_edge(Edge::new(a, b))
            .map_err(|_| EdgeListError::DuplicateEdge { line: line_no })?;
    }
    Ok(LoadedGraph { graph, labels })
}

/// Write `g` as an edge list using its dense node ids.
pub fn save_edge_list(g: &Graph, path: &Path) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for e in g.edges() {
        let (a, b) = e.endpoints();
        writeln!(out, "{a} {b}")?;
    }
    out.flush()
}

/// Convenience constructor used throughout the tests.
pub fn graph_from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Graph {
    let mut g = Graph::new(n);
    for &(a, b) in edges {
        g.add_edge(Edge::new(a, b)).expect("valid edge list");
    }
    g
}
