//! Global similarity indices over dense linear algebra.
//!
//! Each index is realized as an `n x n` similarity matrix computed from the
//! adjacency matrix, the graph Laplacian, or a random-walk transition matrix.
//! Dense factorizations cap practical use at a couple of thousand nodes; the
//! experiment harness enforces a node-count guard before calling in here.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::local::ParseIndexError;

/// The seven global similarity indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GlobalIndexKind {
    Katz,
    LeichtHolmeNewmanGlobal,
    AverageCommuteTime,
    Cosine,
    RandomWalkWithRestart,
    SimRank,
    MatrixForest,
}

pub const ALL_GLOBAL_INDICES: [GlobalIndexKind; 7] = [
    GlobalIndexKind::Katz,
    GlobalIndexKind::LeichtHolmeNewmanGlobal,
    GlobalIndexKind::AverageCommuteTime,
    GlobalIndexKind::Cosine,
    GlobalIndexKind::RandomWalkWithRestart,
    GlobalIndexKind::SimRank,
    GlobalIndexKind::MatrixForest,
];

impl GlobalIndexKind {
    pub fn name(&self) -> &'static str {
        match self {
            GlobalIndexKind::Katz => "katz",
            GlobalIndexKind::LeichtHolmeNewmanGlobal => "lhng",
            GlobalIndexKind::AverageCommuteTime => "act",
            GlobalIndexKind::Cosine => "cos",
            GlobalIndexKind::RandomWalkWithRestart => "rwr",
            GlobalIndexKind::SimRank => "simrank",
            GlobalIndexKind::MatrixForest => "mfi",
        }
    }
}

impl fmt::Display for GlobalIndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GlobalIndexKind {
    type Err = ParseIndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "katz" => GlobalIndexKind::Katz,
            "lhng" => GlobalIndexKind::LeichtHolmeNewmanGlobal,
            "act" => GlobalIndexKind::AverageCommuteTime,
            "cos" => GlobalIndexKind::Cosine,
            "rwr" => GlobalIndexKind::RandomWalkWithRestart,
            "simrank" => GlobalIndexKind::SimRank,
            "mfi" => GlobalIndexKind::MatrixForest,
            other => return Err(ParseIndexError(other.to_string())),
        })
    }
}

/// Parameters for the global indices.
///
/// The Katz dampening factor is always `1/(2 λ*)`, so it is derived from the
/// graph rather than stored here.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalParams {
    /// LHN-Global free parameter φ.
    pub lhn_phi: f64,
    /// Random-walk return probability (the walker keeps walking with this
    /// probability).
    pub rwr_return: f64,
    /// SimRank decay factor.
    pub simrank_decay: f64,
    pub simrank_max_iters: usize,
    pub simrank_tolerance: f64,
    /// Power-iteration settings for the largest adjacency eigenvalue.
    pub eigen_tolerance: f64,
    pub eigen_max_iters: usize,
}

impl Default for GlobalParams {
    fn default() -> Self {
        GlobalParams {
            lhn_phi: 97.0 / 100.0,
            rwr_return: 3.0 / 4.0,
            simrank_decay: 8.0 / 10.0,
            simrank_max_iters: 100,
            simrank_tolerance: 1e-6,
            eigen_tolerance: 1e-10,
            eigen_max_iters: 10_000,
        }
    }
}

#[derive(Debug, Error)]
pub enum GlobalIndexError {
    #[error("graph has no edges; the largest adjacency eigenvalue is 0")]
    EdgelessGraph,
    #[error("power iteration did not converge within {0} iterations")]
    EigenNotConverged(usize),
    #[error("matrix is singular; parameter constraints violated for {0}")]
    SingularSystem(GlobalIndexKind),
    #[error("simrank did not converge within {0} iterations")]
    SimRankNotConverged(usize),
    #[error("similarity matrix is {actual}x{actual} but the graph has {expected} nodes")]
    DimensionMismatch { actual: usize, expected: usize },
}

/// A dense symmetric similarity matrix for one global index.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    pub kind: GlobalIndexKind,
    pub matrix: DMatrix<f64>,
}

fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for v in 0..n {
        for &w in g.neighbors(v) {
            a[(v, w)] = 1.0;
        }
    }
    a
}

fn laplacian_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut l = DMatrix::zeros(n, n);
    for v in 0..n {
        l[(v, v)] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            l[(v, w)] = -1.0;
        }
    }
    l
}

/// Largest eigenvalue of the adjacency matrix via power iteration from the
/// normalized all-ones vector.
///
/// For bipartite graphs the iterate may keep a component on the `-λ*`
/// eigenvector, so convergence is judged on the norm-growth estimate
/// `||A x||`, which settles on λ* either way.
pub fn largest_eigenvalue(g: &Graph, params: &GlobalParams) -> Result<f64, GlobalIndexError> {
    if g.edge_count() == 0 {
        return Err(GlobalIndexError::EdgelessGraph);
    }
    let n = g.node_count();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut estimate = 0.0f64;
    for _ in 0..params.eigen_max_iters {
        let mut next = vec![0.0; n];
        for v in 0..n {
            for &w in g.neighbors(v) {
                next[v] += x[w];
            }
        }
        let norm = next.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm == 0.0 {
            // all-ones started orthogonal to every nonzero mode; cannot
            // happen for a nonnegative matrix with at least one edge
            return Err(GlobalIndexError::EigenNotConverged(params.eigen_max_iters));
        }
        for t in &mut next {
            *t /= norm;
        }
        if (norm - estimate).abs() < params.eigen_tolerance {
            return Ok(norm);
        }
        estimate = norm;
        x = next;
    }
    Err(GlobalIndexError::EigenNotConverged(params.eigen_max_iters))
}

/// Moore-Penrose pseudoinverse of the Laplacian `L = D - A`, via symmetric
/// eigendecomposition with eigenvalues below `1e-10 * λ_max` treated as zero.
pub fn laplacian_pseudoinverse(g: &Graph) -> DMatrix<f64> {
    let l = laplacian_matrix(g);
    let n = g.node_count();
    if n == 0 {
        return l;
    }
    let eig = l.symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = 1e-10 * lambda_max.max(1.0);
    let mut inv = DMatrix::zeros(n, n);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() > cutoff {
            let col = eig.eigenvectors.column(i);
            // rank-one update inv += (1/λ) v vᵀ
            for r in 0..n {
                for c in 0..n {
                    inv[(r, c)] += col[r] * col[c] / lambda;
                }
            }
        }
    }
    inv
}

fn transition_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut p = DMatrix::zeros(n, n);
    for v in 0..n {
        let d = g.degree(v);
        if d == 0 {
            continue; // absorbing row for isolated nodes
        }
        let share = 1.0 / d as f64;
        for &w in g.neighbors(v) {
            p[(v, w)] = share;
        }
    }
    p
}

fn invert(m: DMatrix<f64>, kind: GlobalIndexKind) -> Result<DMatrix<f64>, GlobalIndexError> {
    m.try_inverse()
        .ok_or(GlobalIndexError::SingularSystem(kind))
}

/// Compute the similarity matrix for the requested global index.
pub fn global_similarity(
    g: &Graph,
    kind: GlobalIndexKind,
    params: &GlobalParams,
) -> Result<SimilarityMatrix, GlobalIndexError> {
    let n = g.node_count();
    let matrix = match kind {
        GlobalIndexKind::Katz => {
            let lambda = largest_eigenvalue(g, params)?;
            let beta = 1.0 / (2.0 * lambda);
            let a = adjacency_matrix(g);
            let system = DMatrix::identity(n, n) - a * beta;
            invert(system, kind)? - DMatrix::identity(n, n)
        }
        GlobalIndexKind::LeichtHolmeNewmanGlobal => {
            let lambda = largest_eigenvalue(g, params)?;
            let a = adjacency_matrix(g);
            let system = DMatrix::identity(n, n) - a * (params.lhn_phi / lambda);
            let core = invert(system, kind)?;
            let scale = 2.0 * g.edge_count() as f64 * lambda;
            // D^{-1} entries, with degree-0 treated as 0
            let dinv: Vec<f64> = (0..n)
                .map(|v| {
                    let d = g.degree(v);
                    if d == 0 {
                        0.0
                    } else {
                        1.0 / d as f64
                    }
                })
                .collect();
            DMatrix::from_fn(n, n, |i, j| scale * dinv[i] * core[(i, j)] * dinv[j])
        }
        GlobalIndexKind::AverageCommuteTime => {
            let lp = laplacian_pseudoinverse(g);
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    return 0.0;
                }
                let denom = lp[(i, i)] + lp[(j, j)] - 2.0 * lp[(i, j)];
                if denom > 0.0 {
                    1.0 / denom
                } else {
                    0.0 // both nodes isolated
                }
            })
        }
        GlobalIndexKind::Cosine => {
            let lp = laplacian_pseudoinverse(g);
            DMatrix::from_fn(n, n, |i, j| {
                let denom = (lp[(i, i)] * lp[(j, j)]).sqrt();
                if denom > 0.0 {
                    lp[(i, j)] / denom
                } else {
                    0.0
                }
            })
        }
        GlobalIndexKind::RandomWalkWithRestart => {
            let c = params.rwr_return;
            let p = transition_matrix(g);
            let system = DMatrix::identity(n, n) - p.transpose() * c;
            let q = invert(system, kind)? * (1.0 - c);
            DMatrix::from_fn(n, n, |i, j| q[(i, j)] + q[(j, i)])
        }
        GlobalIndexKind::SimRank => simrank(g, params)?,
        GlobalIndexKind::MatrixForest => {
            let system = DMatrix::identity(n, n) + laplacian_matrix(g);
            invert(system, kind)?
        }
    };
    Ok(SimilarityMatrix { kind, matrix })
}

/// Fixed-point SimRank iteration `S' = c P S Pᵀ` with the diagonal pinned to
/// 1 after every sweep. Rows of `P` for isolated nodes are zero, so pairs
/// involving a neighborless node stay at 0.
fn simrank(g: &Graph, params: &GlobalParams) -> Result<DMatrix<f64>, GlobalIndexError> {
    let n = g.node_count();
    let p = transition_matrix(g);
    let mut s = DMatrix::identity(n, n);
    for _ in 0..params.simrank_max_iters {
        let mut next = &p * &s * p.transpose() * params.simrank_decay;
        for i in 0..n {
            next[(i, i)] = 1.0;
        }
        let delta = (&next - &s).abs().max();
        s = next;
        if delta < params.simrank_tolerance {
            return Ok(s);
        }
    }
    Err(GlobalIndexError::SimRankNotConverged(
        params.simrank_max_iters,
    ))
}

/// Restrict a similarity matrix to the non-edges of `g`, in lexicographic
/// pair order.
pub fn matrix_to_nonedge_scores(
    s: &SimilarityMatrix,
    g: &Graph,
) -> Result<Vec<(Edge, f64)>, GlobalIndexError> {
    if s.matrix.nrows() != g.node_count() {
        return Err(GlobalIndexError::DimensionMismatch {
            actual: s.matrix.nrows(),
            expected: g.node_count(),
        });
    }
    Ok(g.non_edges()
        .map(|e| {
            let (a, b) = e.endpoints();
            (e, s.matrix[(a, b)])
        })
        .collect())
}
