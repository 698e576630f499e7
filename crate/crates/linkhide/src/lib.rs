//! Topological link prediction and link hiding.
//!
//! The crate has three layers:
//!
//! * scoring: nine local similarity indices ([`local`]) and seven global
//!   ones ([`global`]) over an undirected simple [`graph::Graph`];
//! * evaluation: tie-aware AUC, average precision, and ROC/PR curves
//!   ([`metrics`]);
//! * evasion: heuristics that rewire a network to push a chosen set of
//!   hidden relations down the prediction ranking ([`evasion`]), plus
//!   synthetic network generators ([`generators`]) and an experiment
//!   harness ([`harness`]) behind the `linkhide` command-line binary.
//!
//! ```
//! use linkhide::graph::{graph_from_edges, Edge};
//! use linkhide::local::{local_score, LocalIndexKind};
//!
//! let g = graph_from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
//! let s = local_score(&g, Edge::new(0, 2), LocalIndexKind::Jaccard).unwrap();
//! assert_eq!(s, 0.5);
//! ```

pub mod evasion;
pub mod generators;
pub mod global;
pub mod graph;
pub mod harness;
pub mod local;
pub mod metrics;

pub use graph::{Edge, Graph};

#[cfg(doctest)]
mod book {
    macro_rules! doc_check {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(dead_code)]
            mod $name {}
        };
    }

    doc_check!(indices, "../book/src/indices.md");
    doc_check!(metrics, "../book/src/metrics.md");
    doc_check!(hiding, "../book/src/hiding.md");
    doc_check!(generators, "../book/src/generators.md");
    doc_check!(hardness, "../book/src/hardness.md");
}
