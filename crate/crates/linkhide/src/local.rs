//! Local similarity indices.
//!
//! Each index scores a non-edge `(v,w)` from the endpoint neighborhoods
//! alone. Every formula has the common-neighbor count (or a sum over common
//! neighbors) in the numerator, so a pair without common neighbors scores 0
//! for all nine indices.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph};

/// The nine local similarity indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalIndexKind {
    CommonNeighbors,
    Salton,
    Jaccard,
    Sorensen,
    HubPromoted,
    HubDepressed,
    LeichtHolmeNewman,
    AdamicAdar,
    ResourceAllocation,
}

pub const ALL_LOCAL_INDICES: [LocalIndexKind; 9] = [
    LocalIndexKind::CommonNeighbors,
    LocalIndexKind::Salton,
    LocalIndexKind::Jaccard,
    LocalIndexKind::Sorensen,
    LocalIndexKind::HubPromoted,
    LocalIndexKind::HubDepressed,
    LocalIndexKind::LeichtHolmeNewman,
    LocalIndexKind::AdamicAdar,
    LocalIndexKind::ResourceAllocation,
];

impl LocalIndexKind {
    pub fn name(&self) -> &'static str {
        match self {
            LocalIndexKind::CommonNeighbors => "cn",
            LocalIndexKind::Salton => "salton",
            LocalIndexKind::Jaccard => "jaccard",
            LocalIndexKind::Sorensen => "sorensen",
            LocalIndexKind::HubPromoted => "hpi",
            LocalIndexKind::HubDepressed => "hdi",
            LocalIndexKind::LeichtHolmeNewman => "lhn",
            LocalIndexKind::AdamicAdar => "aa",
            LocalIndexKind::ResourceAllocation => "ra",
        }
    }
}

impl fmt::Display for LocalIndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalScoreError {
    #[error("pair {0} is an edge; local indices are defined on non-edges only")]
    NotANonEdge(Edge),
    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown index name '{0}'")]
pub struct ParseIndexError(pub String);

impl FromStr for LocalIndexKind {
    type Err = ParseIndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "cn" => LocalIndexKind::CommonNeighbors,
            "salton" => LocalIndexKind::Salton,
            "jaccard" => LocalIndexKind::Jaccard,
            "sorensen" => LocalIndexKind::Sorensen,
            "hpi" => LocalIndexKind::HubPromoted,
            "hdi" => LocalIndexKind::HubDepressed,
            "lhn" => LocalIndexKind::LeichtHolmeNewman,
            "aa" => LocalIndexKind::AdamicAdar,
            "ra" => LocalIndexKind::ResourceAllocation,
            other => return Err(ParseIndexError(other.to_string())),
        })
    }
}

/// Which of the three score factors an index responds to.
///
/// Every index increases with the number of common neighbors. The
/// endpoint-degree-sensitive set is everything except CN, AA, RA; only AA and
/// RA are sensitive to the degrees of the common neighbors themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorProfile {
    pub increases_with_common_neighbors: bool,
    pub sensitive_to_endpoint_degree: bool,
    pub sensitive_to_common_neighbor_degree: bool,
}

pub fn factor_profile(kind: LocalIndexKind) -> FactorProfile {
    use LocalIndexKind::*;
    FactorProfile {
        increases_with_common_neighbors: true,
        sensitive_to_endpoint_degree: !matches!(
            kind,
            CommonNeighbors | AdamicAdar | ResourceAllocation
        ),
        sensitive_to_common_neighbor_degree: matches!(kind, AdamicAdar | ResourceAllocation),
    }
}

/// Score a non-edge under one of the nine local indices.
///
/// Scoring a pair that is an edge is an error: the indices are defined on
/// non-edges only.
pub fn local_score(g: &Graph, e: Edge, kind: LocalIndexKind) -> Result<f64, LocalScoreError> {
    let (v, w) = e.endpoints();
    let n = g.node_count();
    if v >= n || w >= n {
        return Err(LocalScoreError::NodeOutOfRange(v.max(w)));
    }
    if g.has_edge(e) {
        return Err(LocalScoreError::NotANonEdge(e));
    }
    Ok(local_score_unchecked(g, v, w, kind))
}

/// The raw formula value; callers must guarantee `(v,w)` is a non-edge.
pub(crate) fn local_score_unchecked(g: &Graph, v: usize, w: usize, kind: LocalIndexKind) -> f64 {
    use LocalIndexKind::*;
    let dv = g.degree(v) as f64;
    let dw = g.degree(w) as f64;
    match kind {
        CommonNeighbors => g.common_neighbor_count(v, w) as f64,
        Salton => {
            let cn = g.common_neighbor_count(v, w) as f64;
            if cn == 0.0 {
                0.0
            } else {
                cn / (dv * dw).sqrt()
            }
        }
        Jaccard => {
            let cn = g.common_neighbor_count(v, w) as f64;
            if cn == 0.0 {
                0.0
            } else {
                cn / (dv + dw - cn)
            }
        }
        Sorensen => {
            let cn = g.common_neighbor_count(v, w) as f64;
            if cn == 0.0 {
                0.0
            } else {
                2.0 * cn / (dv + dw)
            }
        }
        HubPromoted => {
            let cn = g.common_neighbor_count(v, w) as f64;
            if cn == 0.0 {
                0.0
            } else {
                cn / dv.min(dw)
            }
        }
        HubDepressed => {
            let cn = g.common_neighbor_count(v, w) as f64;
            if cn == 0.0 {
                0.0
            } else {
                cn / dv.max(dw)
            }
        }
        LeichtHolmeNewman => {
            let cn = g.common_neighbor_count(v, w) as f64;
            if cn == 0.0 {
                0.0
            } else {
                cn / (dv * dw)
            }
        }
        AdamicAdar => g
            .common_neighbors(v, w)
            .iter()
            .map(|&u| {
                let d = g.degree(u);
                // a common neighbor of a non-edge always has degree >= 2
                debug_assert!(d >= 2);
                1.0 / (d as f64).ln()
            })
            .sum(),
        ResourceAllocation => g
            .common_neighbors(v, w)
            .iter()
            .map(|&u| 1.0 / g.degree(u) as f64)
            .sum(),
    }
}

/// Scores for every non-edge, in lexicographic pair order.
pub fn local_score_all(g: &Graph, kind: LocalIndexKind) -> Vec<(Edge, f64)> {
    g.non_edges()
        .map(|e| {
            let (v, w) = e.endpoints();
            (e, local_score_unchecked(g, v, w, kind))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_edges;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-12;

    #[test]
    fn path_graph_hand_values() {
        // a-b-c plus a pendant to give d(c)=2: nodes a=0,b=1,c=2 with an
        // extra edge (2,3) so d(0)=1, d(1)=2, d(2)=2, N(0,2)={1}
        let g = graph_from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let e = Edge::new(0, 2);
        let expect = [
            (LocalIndexKind::CommonNeighbors, 1.0),
            (LocalIndexKind::Salton, 1.0 / 2f64.sqrt()),
            (LocalIndexKind::Jaccard, 0.5),
            (LocalIndexKind::Sorensen, 2.0 / 3.0),
            (LocalIndexKind::HubPromoted, 1.0),
            (LocalIndexKind::HubDepressed, 0.5),
            (LocalIndexKind::LeichtHolmeNewman, 0.5),
            (LocalIndexKind::AdamicAdar, 1.0 / 2f64.ln()),
            (LocalIndexKind::ResourceAllocation, 0.5),
        ];
        for (kind, want) in expect {
            assert_abs_diff_eq!(local_score(&g, e, kind).unwrap(), want, epsilon = TOL);
        }
    }

    #[test]
    fn no_common_neighbors_scores_zero() {
        let g = graph_from_edges(4, &[(0, 1), (2, 3)]);
        for kind in ALL_LOCAL_INDICES {
            assert_eq!(local_score(&g, Edge::new(0, 2), kind).unwrap(), 0.0);
        }
    }

    #[test]
    fn scoring_an_edge_is_rejected() {
        let g = graph_from_edges(3, &[(0, 1)]);
        assert_eq!(
            local_score(&g, Edge::new(0, 1), LocalIndexKind::Jaccard),
            Err(LocalScoreError::NotANonEdge(Edge::new(0, 1)))
        );
    }

    #[test]
    fn symmetry_in_endpoint_order() {
        let g = graph_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 4)]);
        for kind in ALL_LOCAL_INDICES {
            for e in g.non_edges().collect::<Vec<_>>() {
                let (v, w) = e.endpoints();
                assert_eq!(
                    local_score_unchecked(&g, v, w, kind),
                    local_score_unchecked(&g, w, v, kind)
                );
            }
        }
    }

    #[test]
    fn score_all_matches_pointwise() {
        let g = graph_from_edges(3, &[(0, 1), (1, 2)]);
        let all = local_score_all(&g, LocalIndexKind::CommonNeighbors);
        assert_eq!(all, vec![(Edge::new(0, 2), 1.0)]);

        let triangle = graph_from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(local_score_all(&triangle, LocalIndexKind::Jaccard).is_empty());

        // 4-node star, center 0: every leaf pair scores 1/3 under RA
        let star = graph_from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let ra = local_score_all(&star, LocalIndexKind::ResourceAllocation);
        assert_eq!(ra.len(), 3);
        for (_, s) in ra {
            assert_abs_diff_eq!(s, 1.0 / 3.0, epsilon = TOL);
        }
    }

    #[test]
    fn factor_profiles() {
        use LocalIndexKind::*;
        assert_eq!(
            factor_profile(CommonNeighbors),
            FactorProfile {
                increases_with_common_neighbors: true,
                sensitive_to_endpoint_degree: false,
                sensitive_to_common_neighbor_degree: false
            }
        );
        assert_eq!(
            factor_profile(Jaccard),
            FactorProfile {
                increases_with_common_neighbors: true,
                sensitive_to_endpoint_degree: true,
                sensitive_to_common_neighbor_degree: false
            }
        );
        assert_eq!(
            factor_profile(AdamicAdar),
            FactorProfile {
                increases_with_common_neighbors: true,
                sensitive_to_endpoint_degree: false,
                sensitive_to_common_neighbor_degree: true
            }
        );
        let endpoint_sensitive: Vec<_> = ALL_LOCAL_INDICES
            .iter()
            .filter(|k| factor_profile(**k).sensitive_to_endpoint_degree)
            .collect();
        assert_eq!(endpoint_sensitive.len(), 6);
        let cn_deg_sensitive: Vec<_> = ALL_LOCAL_INDICES
            .iter()
            .filter(|k| factor_profile(**k).sensitive_to_common_neighbor_degree)
            .copied()
            .collect();
        assert_eq!(cn_deg_sensitive, vec![AdamicAdar, ResourceAllocation]);
    }

    #[test]
    fn index_names_round_trip() {
        for kind in ALL_LOCAL_INDICES {
            assert_eq!(kind.name().parse::<LocalIndexKind>().unwrap(), kind);
        }
    }
}
