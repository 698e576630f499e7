//! Tie-aware ranking evaluation: AUC, average precision, and ROC/PR curve
//! points for a scored set of non-edges split into a probe set and the rest.
//!
//! AUC and AP are computed from closed formulas that count strict wins and
//! half-count ties, so their values do not depend on any tie-break order.
//! Curve points do need a total order; they refine the score order by the
//! normalized edge order, which keeps them deterministic.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("probe set is empty")]
    EmptyProbe,
    #[error("rest set is empty (probe covers every scored non-edge)")]
    EmptyRest,
    #[error("probe edge {0} is missing from the scored non-edges")]
    ProbeNotScored(Edge),
}

/// A score assignment over the non-edges of a training graph, with a probe
/// subset marking the pairs the ranking should surface.
#[derive(Debug, Clone)]
pub struct ScoredRanking {
    /// `(edge, score)` for every non-edge, in lexicographic edge order.
    scores: Vec<(Edge, f64)>,
    probe: HashSet<Edge>,
}

impl ScoredRanking {
    pub fn new(scores: Vec<(Edge, f64)>, probe: HashSet<Edge>) -> Result<Self, MetricsError> {
        if probe.is_empty() {
            return Err(MetricsError::EmptyProbe);
        }
        if probe.len() >= scores.len() {
            return Err(MetricsError::EmptyRest);
        }
        let scored: HashSet<Edge> = scores.iter().map(|(e, _)| *e).collect();
        if let Some(&missing) = probe.iter().find(|e| !scored.contains(e)) {
            return Err(MetricsError::ProbeNotScored(missing));
        }
        Ok(ScoredRanking { scores, probe })
    }

    pub fn probe_len(&self) -> usize {
        self.probe.len()
    }

    pub fn rest_len(&self) -> usize {
        self.scores.len() - self.probe.len()
    }

    fn probe_scores(&self) -> Vec<f64> {
        self.scores
            .iter()
            .filter(|(e, _)| self.probe.contains(e))
            .map(|&(_, s)| s)
            .collect()
    }

    fn rest_scores(&self) -> Vec<f64> {
        self.scores
            .iter()
            .filter(|(e, _)| !self.probe.contains(e))
            .map(|&(_, s)| s)
            .collect()
    }
}

fn sort_scores(xs: &mut [f64]) {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("scores must not be NaN"));
}

/// Count of elements strictly below `x` and exactly equal to `x` in a sorted
/// slice. Ties are detected with exact floating-point equality.
fn rank_counts(sorted: &[f64], x: f64) -> (usize, usize) {
    let below = sorted.partition_point(|&s| s < x);
    let not_above = sorted.partition_point(|&s| s <= x);
    (below, not_above - below)
}

/// Probability that a random probe element outscores a random rest element,
/// ties counted half. Computed by a sorted sweep rather than pairwise
/// enumeration.
pub fn auc(r: &ScoredRanking) -> f64 {
    let probe = r.probe_scores();
    let mut rest = r.rest_scores();
    sort_scores(&mut rest);
    let mut wins = 0.0;
    for &q in &probe {
        let (below, equal) = rank_counts(&rest, q);
        wins += below as f64 + 0.5 * equal as f64;
    }
    wins / (probe.len() as f64 * rest.len() as f64)
}

/// Tie-aware average precision: for each probe element, the fraction of
/// probe elements among everything ranked at or above it, with ties on both
/// sides counted half.
pub fn average_precision(r: &ScoredRanking) -> f64 {
    let probe = r.probe_scores();
    let mut all: Vec<f64> = r.scores.iter().map(|&(_, s)| s).collect();
    sort_scores(&mut all);
    let mut probe_sorted = probe.clone();
    sort_scores(&mut probe_sorted);

    let mut total = 0.0;
    for &q in &probe {
        let (p_below, p_equal) = rank_counts(&probe_sorted, q);
        let p_above = probe.len() - p_below - p_equal;
        let (a_below, a_equal) = rank_counts(&all, q);
        let a_above = all.len() - a_below - a_equal;
        // the tied counts exclude the probe element itself
        let numer = p_above as f64 + 1.0 + 0.5 * (p_equal - 1) as f64;
        let denom = a_above as f64 + 1.0 + 0.5 * (a_equal - 1) as f64;
        total += numer / denom;
    }
    total / probe.len() as f64
}

/// The evaluation pair `(auc, ap)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankingEvaluation {
    pub auc: f64,
    pub ap: f64,
}

pub fn evaluate(r: &ScoredRanking) -> RankingEvaluation {
    RankingEvaluation {
        auc: auc(r),
        ap: average_precision(r),
    }
}

/// Ranking order for curve points: descending score, ties by edge order.
fn ranked_edges(r: &ScoredRanking) -> Vec<(Edge, f64)> {
    let mut ranked = r.scores.clone();
    ranked.sort_by(|(ea, sa), (eb, sb)| {
        sb.partial_cmp(sa)
            .expect("scores must not be NaN")
            .then(ea.cmp(eb))
    });
    ranked
}

/// ROC curve points `(|σ_k ∩ X|/|X|, |σ_k ∩ Q|/|Q|)` for `k = 1..|Ē|`.
pub fn roc_points(r: &ScoredRanking) -> Vec<(f64, f64)> {
    let q_total = r.probe_len() as f64;
    let x_total = r.rest_len() as f64;
    let mut q_hits = 0usize;
    let mut x_hits = 0usize;
    ranked_edges(r)
        .iter()
        .map(|(e, _)| {
            if r.probe.contains(e) {
                q_hits += 1;
            } else {
                x_hits += 1;
            }
            (x_hits as f64 / x_total, q_hits as f64 / q_total)
        })
        .collect()
}

/// PR curve points `(|σ_k ∩ Q|/|Q|, |σ_k ∩ Q|/k)` for `k = 1..|Ē|`.
pub fn pr_points(r: &ScoredRanking) -> Vec<(f64, f64)> {
    let q_total = r.probe_len() as f64;
    let mut q_hits = 0usize;
    ranked_edges(r)
        .iter()
        .enumerate()
        .map(|(i, (e, _))| {
            if r.probe.contains(e) {
                q_hits += 1;
            }
            (q_hits as f64 / q_total, q_hits as f64 / (i + 1) as f64)
        })
        .collect()
}

/// Render curve points as two-column CSV with header `x,y`.
pub fn points_to_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in points {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}
