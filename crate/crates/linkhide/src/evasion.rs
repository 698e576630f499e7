//! Link hiding: the evasion problem model, the CTR and OTC heuristics with
//! their fast variants, an alternating mixed strategy, a brute-force optimum
//! oracle, and the Γ(c,P) hardness gadget.
//!
//! An evader knows a set `H` of hidden relations (non-edges of the seeker's
//! view that the seeker would like to predict) and spends a budget of edge
//! additions and removals to push those pairs down the similarity ranking.
//! CTR removes edges that close triads around hidden pairs; OTC adds edges
//! that create open triads elsewhere, subject to a guard that never grants a
//! hidden pair a new common neighbor.
//!
//! All argmax selections break ties toward the smallest normalized edge, so
//! every run is deterministic and the naive and fast variants of each
//! heuristic produce identical plans.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::global::{
    global_similarity, matrix_to_nonedge_scores, GlobalIndexError, GlobalIndexKind, GlobalParams,
};
use crate::graph::{Edge, Graph, NodeId};
use crate::local::{local_score_all, LocalIndexKind};
use crate::metrics::{evaluate, MetricsError, RankingEvaluation, ScoredRanking};

/// Maximum number of node pairs a brute-force oracle call may evaluate.
pub const ORACLE_EVALUATION_CAP: u128 = 2_000_000;

/// Node-count limit for brute forcing global-index instances; each candidate
/// set costs a dense matrix factorization.
pub const ORACLE_GLOBAL_NODE_LIMIT: usize = 200;

/// The similarity index the seeker runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scorer {
    Local(LocalIndexKind),
    Global(GlobalIndexKind),
}

impl std::fmt::Display for Scorer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scorer::Local(k) => f.write_str(k.name()),
            Scorer::Global(k) => f.write_str(k.name()),
        }
    }
}

impl std::str::FromStr for Scorer {
    type Err = crate::local::ParseIndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(k) = s.parse::<LocalIndexKind>() {
            return Ok(Scorer::Local(k));
        }
        s.parse::<GlobalIndexKind>().map(Scorer::Global)
    }
}

/// The ranking metric the evader minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Auc,
    Ap,
}

impl Metric {
    pub fn of(&self, eval: RankingEvaluation) -> f64 {
        match self {
            Metric::Auc => eval.auc,
            Metric::Ap => eval.ap,
        }
    }
}

/// An addable or removable pair set. `All` means "every legal pair"
/// (`Ē \ H` for additions, `E` for removals) without materializing it, which
/// matters when `Ē` has billions of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateSet {
    All,
    Explicit(BTreeSet<Edge>),
}

#[derive(Debug, Error)]
pub enum EvasionError {
    #[error("hidden set must be nonempty")]
    EmptyHidden,
    #[error("hidden pair {0} is an edge of the graph")]
    HiddenIsEdge(Edge),
    #[error("addable pair {0} is an existing edge or a hidden pair")]
    BadAddable(Edge),
    #[error("removable pair {0} is not an edge")]
    BadRemovable(Edge),
    #[error("node id {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Global(#[from] GlobalIndexError),
    #[error("brute force would need {required} evaluations, above the cap of {cap}")]
    SearchSpaceExceeded { required: u128, cap: u128 },
    #[error("brute forcing a global index is limited to {ORACLE_GLOBAL_NODE_LIMIT} nodes, got {0}")]
    GlobalTooLarge(usize),
    #[error("plan step {step} cannot be applied: {reason}")]
    BadPlanStep { step: String, reason: String },
    #[error("invalid gadget spec: {0}")]
    BadGadgetSpec(String),
    #[error("constant {given} is not the proof constant {expected} for index {kind}")]
    WrongConstant {
        kind: LocalIndexKind,
        given: usize,
        expected: usize,
    },
    #[error("cannot parse plan line {line}: '{text}'")]
    PlanParse { line: usize, text: String },
}

/// One evasion problem: the seeker's view of the network, the index and
/// metric under attack, the hidden pairs, and the evader's action space.
#[derive(Debug, Clone)]
pub struct EvasionInstance {
    pub graph: Graph,
    pub scorer: Scorer,
    pub metric: Metric,
    pub hidden: BTreeSet<Edge>,
    pub budget: usize,
    pub addable: CandidateSet,
    pub removable: CandidateSet,
}

impl EvasionInstance {
    pub fn new(
        graph: Graph,
        scorer: Scorer,
        metric: Metric,
        hidden: BTreeSet<Edge>,
        budget: usize,
        addable: CandidateSet,
        removable: CandidateSet,
    ) -> Result<Self, EvasionError> {
        let n = graph.node_count();
        if hidden.is_empty() {
            return Err(EvasionError::EmptyHidden);
        }
        for &h in &hidden {
            if h.larger() >= n {
                return Err(EvasionError::NodeOutOfRange(h.larger()));
            }
            if graph.has_edge(h) {
                return Err(EvasionError::HiddenIsEdge(h));
            }
        }
        if let CandidateSet::Explicit(set) = &addable {
            for &e in set {
                if e.larger() >= n {
                    return Err(EvasionError::NodeOutOfRange(e.larger()));
                }
                if graph.has_edge(e) || hidden.contains(&e) {
                    return Err(EvasionError::BadAddable(e));
                }
            }
        }
        if let CandidateSet::Explicit(set) = &removable {
            for &e in set {
                if e.larger() >= n {
                    return Err(EvasionError::NodeOutOfRange(e.larger()));
                }
                if !graph.has_edge(e) {
                    return Err(EvasionError::BadRemovable(e));
                }
            }
        }
        Ok(EvasionInstance {
            graph,
            scorer,
            metric,
            hidden,
            budget,
            addable,
            removable,
        })
    }

    /// Convenience constructor with the default action space `Â = Ē \ H`,
    /// `R̂ = E`.
    pub fn unrestricted(
        graph: Graph,
        scorer: Scorer,
        metric: Metric,
        hidden: BTreeSet<Edge>,
        budget: usize,
    ) -> Result<Self, EvasionError> {
        EvasionInstance::new(
            graph,
            scorer,
            metric,
            hidden,
            budget,
            CandidateSet::All,
            CandidateSet::All,
        )
    }

    /// Endpoints of the hidden pairs.
    fn hidden_nodes(&self) -> BTreeSet<NodeId> {
        self.hidden
            .iter()
            .flat_map(|h| [h.smaller(), h.larger()])
            .collect()
    }
}

/// One modification step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanStep {
    Add(Edge),
    Remove(Edge),
}

impl PlanStep {
    pub fn edge(&self) -> Edge {
        match self {
            PlanStep::Add(e) | PlanStep::Remove(e) => *e,
        }
    }
}

/// An ordered sequence of additions and removals realizing `(A*, R*)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModificationPlan {
    pub steps: Vec<PlanStep>,
}

impl ModificationPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Text log form: one step per line, `+ a b` or `- a b`.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let (sign, e) = match step {
                PlanStep::Add(e) => ('+', e),
                PlanStep::Remove(e) => ('-', e),
            };
            out.push_str(&format!("{sign} {} {}\n", e.smaller(), e.larger()));
        }
        out
    }

    pub fn from_log(text: &str) -> Result<Self, EvasionError> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = || EvasionError::PlanParse {
                line: i + 1,
                text: raw.to_string(),
            };
            let mut parts = line.split_whitespace();
            let sign = parts.next().ok_or_else(err)?;
            let a: NodeId = parts.next().and_then(|t| t.parse().ok()).ok_or_else(err)?;
            let b: NodeId = parts.next().and_then(|t| t.parse().ok()).ok_or_else(err)?;
            if parts.next().is_some() || a == b {
                return Err(err());
            }
            let e = Edge::new(a, b);
            steps.push(match sign {
                "+" => PlanStep::Add(e),
                "-" => PlanStep::Remove(e),
                _ => return Err(err()),
            });
        }
        Ok(ModificationPlan { steps })
    }
}

/// Metric values observed after each executed step, with point 0 being the
/// unmodified graph. Early stops truncate the sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub iteration: usize,
    pub auc: f64,
    pub ap: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    pub fn initial(&self) -> TrajectoryPoint {
        self.points[0]
    }

    pub fn last(&self) -> TrajectoryPoint {
        *self.points.last().expect("trajectory has a point 0")
    }
}

/// Score every non-edge of `g` under the given index, in lexicographic pair
/// order.
pub fn score_nonedges(g: &Graph, scorer: Scorer) -> Result<Vec<(Edge, f64)>, EvasionError> {
    match scorer {
        Scorer::Local(kind) => Ok(local_score_all(g, kind)),
        Scorer::Global(kind) => {
            let s = global_similarity(g, kind, &GlobalParams::default())?;
            Ok(matrix_to_nonedge_scores(&s, g)?)
        }
    }
}

/// Rank all non-edges of `g` with probe set `hidden` and evaluate both
/// metrics.
pub fn evaluate_graph(
    g: &Graph,
    scorer: Scorer,
    hidden: &BTreeSet<Edge>,
) -> Result<RankingEvaluation, EvasionError> {
    let scores = score_nonedges(g, scorer)?;
    let probe = hidden.iter().copied().collect();
    let ranking = ScoredRanking::new(scores, probe)?;
    Ok(evaluate(&ranking))
}

/// Replay a plan on the instance's graph, recording both metrics before any
/// step and after each step.
pub fn plan_trajectory(
    inst: &EvasionInstance,
    plan: &ModificationPlan,
) -> Result<Trajectory, EvasionError> {
    let mut g = inst.graph.clone();
    let mut points = Vec::with_capacity(plan.len() + 1);
    let eval = evaluate_graph(&g, inst.scorer, &inst.hidden)?;
    points.push(TrajectoryPoint {
        iteration: 0,
        auc: eval.auc,
        ap: eval.ap,
    });
    for (i, step) in plan.steps.iter().enumerate() {
        apply_step(&mut g, *step)?;
        let eval = evaluate_graph(&g, inst.scorer, &inst.hidden)?;
        points.push(TrajectoryPoint {
            iteration: i + 1,
            auc: eval.auc,
            ap: eval.ap,
        });
    }
    Ok(Trajectory { points })
}

fn apply_step(g: &mut Graph, step: PlanStep) -> Result<(), EvasionError> {
    let result = match step {
        PlanStep::Add(e) => g.add_edge(e),
        PlanStep::Remove(e) => g.remove_edge(e),
    };
    result.map_err(|e| EvasionError::BadPlanStep {
        step: format!("{step:?}"),
        reason: e.to_string(),
    })
}

/// Apply a plan to a copy of the instance graph and return the instance's
/// chosen metric on the result.
pub fn evaluate_plan(inst: &EvasionInstance, plan: &ModificationPlan) -> Result<f64, EvasionError> {
    let mut g = inst.graph.clone();
    for &step in &plan.steps {
        apply_step(&mut g, step)?;
    }
    let eval = evaluate_graph(&g, inst.scorer, &inst.hidden)?;
    Ok(inst.metric.of(eval))
}

/// Removal candidates: removable edges with an endpoint in some hidden pair.
/// Filtered once, before any modification.
fn ctr_candidates(inst: &EvasionInstance) -> BTreeSet<Edge> {
    let hidden_nodes = inst.hidden_nodes();
    match &inst.removable {
        CandidateSet::All => inst
            .graph
            .edges()
            .filter(|e| hidden_nodes.contains(&e.smaller()) || hidden_nodes.contains(&e.larger()))
            .collect(),
        CandidateSet::Explicit(set) => set
            .iter()
            .copied()
            .filter(|e| hidden_nodes.contains(&e.smaller()) || hidden_nodes.contains(&e.larger()))
            .collect(),
    }
}

/// Per-candidate closed-triad counts on the current graph: for each hidden
/// pair `(x,w)` and each common neighbor `v`, the triad `(x,v,w)` counts
/// toward both of its graph edges `(v,x)` and `(v,w)`.
fn ctr_sigma(
    g: &Graph,
    hidden: &BTreeSet<Edge>,
    candidates: &BTreeSet<Edge>,
) -> BTreeMap<Edge, u64> {
    let mut sigma = BTreeMap::new();
    for h in hidden {
        let (x, w) = h.endpoints();
        for v in g.common_neighbors(x, w) {
            for e in [Edge::new(v, x), Edge::new(v, w)] {
                if candidates.contains(&e) {
                    *sigma.entry(e).or_insert(0u64) += 1;
                }
            }
        }
    }
    sigma
}

/// Closed-Triad-Removal, naive form: recompute every candidate's triad count
/// each iteration and remove the argmax while it is positive.
pub fn run_ctr(inst: &EvasionInstance) -> Result<(ModificationPlan, Trajectory), EvasionError> {
    let plan = plan_ctr(inst)?;
    let trajectory = plan_trajectory(inst, &plan)?;
    Ok((plan, trajectory))
}

/// The CTR plan without metric evaluation (used for benchmarking, and by the
/// harness to score one plan under many indices).
pub fn plan_ctr(inst: &EvasionInstance) -> Result<ModificationPlan, EvasionError> {
    let candidates = ctr_candidates(inst);
    let mut g = inst.graph.clone();
    let mut steps = Vec::new();
    for _ in 0..inst.budget {
        let sigma = ctr_sigma(&g, &inst.hidden, &candidates);
        let best = sigma
            .into_iter()
            .max_by_key(|&(e, s)| (s, Reverse(e)))
            .filter(|&(_, s)| s > 0);
        match best {
            Some((e, _)) => {
                g.remove_edge(e).expect("sigma keys are current edges");
                steps.push(PlanStep::Remove(e));
            }
            None => break,
        }
    }
    Ok(ModificationPlan { steps })
}

/// Max-first priority structure keyed by `(score, Reverse(edge))`, so the
/// maximum entry carries the smallest edge among score ties.
struct ScoreQueue {
    ordered: BTreeSet<(i64, Reverse<Edge>)>,
    score: BTreeMap<Edge, i64>,
}

impl ScoreQueue {
    fn new(scores: BTreeMap<Edge, i64>) -> Self {
        let ordered = scores.iter().map(|(&e, &s)| (s, Reverse(e))).collect();
        ScoreQueue {
            ordered,
            score: scores,
        }
    }

    fn peek_max(&self) -> Option<(Edge, i64)> {
        self.ordered.last().map(|&(s, Reverse(e))| (e, s))
    }

    fn remove(&mut self, e: Edge) {
        if let Some(s) = self.score.remove(&e) {
            self.ordered.remove(&(s, Reverse(e)));
        }
    }

    fn adjust(&mut self, e: Edge, delta: i64) {
        if let Some(s) = self.score.get_mut(&e) {
            self.ordered.remove(&(*s, Reverse(e)));
            *s += delta;
            self.ordered.insert((*s, Reverse(e)));
        }
    }
}

/// CTR with a priority queue and decremental triad-count updates; same plan
/// as [`run_ctr`] under the shared tie-break.
pub fn run_ctr_pq(inst: &EvasionInstance) -> Result<(ModificationPlan, Trajectory), EvasionError> {
    let plan = plan_ctr_pq(inst)?;
    let trajectory = plan_trajectory(inst, &plan)?;
    Ok((plan, trajectory))
}

pub fn plan_ctr_pq(inst: &EvasionInstance) -> Result<ModificationPlan, EvasionError> {
    let candidates = ctr_candidates(inst);
    let mut g = inst.graph.clone();
    let initial: BTreeMap<Edge, i64> = {
        let sigma = ctr_sigma(&g, &inst.hidden, &candidates);
        candidates
            .iter()
            .map(|&e| (e, sigma.get(&e).copied().unwrap_or(0) as i64))
            .collect()
    };
    let mut queue = ScoreQueue::new(initial);
    let mut steps = Vec::new();
    for _ in 0..inst.budget {
        let Some((e, s)) = queue.peek_max() else { break };
        if s <= 0 {
            break;
        }
        let (v, w) = e.endpoints();
        g.remove_edge(e).expect("queued candidates are edges");
        queue.remove(e);
        // triads (z, x, y) that died with this removal: the other graph
        // edge loses one count when the third pair is hidden
        for &z in g.neighbors(v) {
            if inst.hidden.contains(&Edge::new(w, z)) {
                queue.adjust(Edge::new(v, z), -1);
            }
        }
        for &z in g.neighbors(w) {
            if inst.hidden.contains(&Edge::new(v, z)) {
                queue.adjust(Edge::new(w, z), -1);
            }
        }
        steps.push(PlanStep::Remove(e));
    }
    Ok(ModificationPlan { steps })
}

/// Addition candidates: addable non-edges with an endpoint in some hidden
/// pair. Filtered once, before any modification.
fn otc_candidates(inst: &EvasionInstance) -> BTreeSet<Edge> {
    let hidden_nodes = inst.hidden_nodes();
    match &inst.addable {
        CandidateSet::All => {
            let g = &inst.graph;
            let mut out = BTreeSet::new();
            for &h in &hidden_nodes {
                for v in 0..g.node_count() {
                    if v == h {
                        continue;
                    }
                    let e = Edge::new(h, v);
                    if !g.has_edge(e) && !inst.hidden.contains(&e) {
                        out.insert(e);
                    }
                }
            }
            out
        }
        CandidateSet::Explicit(set) => set
            .iter()
            .copied()
            .filter(|e| hidden_nodes.contains(&e.smaller()) || hidden_nodes.contains(&e.larger()))
            .collect(),
    }
}

/// The OTC guard: adding `(v,w)` would give some hidden pair a new common
/// neighbor.
fn otc_guard_trips(g: &Graph, hidden: &BTreeSet<Edge>, v: NodeId, w: NodeId) -> bool {
    g.neighbors(v).iter().any(|&u| hidden.contains(&Edge::new(w, u)))
        || g.neighbors(w).iter().any(|&u| hidden.contains(&Edge::new(v, u)))
}

/// Open triads created by adding `(v,w)`: neighbors of exactly one endpoint.
fn otc_score(g: &Graph, v: NodeId, w: NodeId) -> i64 {
    (g.degree(v) + g.degree(w)) as i64 - 2 * g.common_neighbor_count(v, w) as i64
}

/// Open-Triad-Creation, naive form: each iteration rescores every remaining
/// candidate (guard violations score minus infinity) and adds the argmax.
pub fn run_otc(inst: &EvasionInstance) -> Result<(ModificationPlan, Trajectory), EvasionError> {
    let plan = plan_otc(inst)?;
    let trajectory = plan_trajectory(inst, &plan)?;
    Ok((plan, trajectory))
}

pub fn plan_otc(inst: &EvasionInstance) -> Result<ModificationPlan, EvasionError> {
    let mut candidates = otc_candidates(inst);
    let mut g = inst.graph.clone();
    let mut steps = Vec::new();
    for _ in 0..inst.budget {
        let best = candidates
            .iter()
            .filter_map(|&e| {
                let (v, w) = e.endpoints();
                if otc_guard_trips(&g, &inst.hidden, v, w) {
                    None
                } else {
                    Some((e, otc_score(&g, v, w)))
                }
            })
            .max_by_key(|&(e, s)| (s, Reverse(e)));
        match best {
            Some((e, _)) => {
                g.add_edge(e).expect("candidates are non-edges");
                candidates.remove(&e);
                steps.push(PlanStep::Add(e));
            }
            None => break,
        }
    }
    Ok(ModificationPlan { steps })
}

/// OTC with incremental score maintenance; same plan as [`run_otc`].
///
/// Guard violations are dropped permanently: the edge set only grows under
/// OTC, so a tripped guard can never untrip.
pub fn run_otc_fast(inst: &EvasionInstance) -> Result<(ModificationPlan, Trajectory), EvasionError> {
    let plan = plan_otc_fast(inst)?;
    let trajectory = plan_trajectory(inst, &plan)?;
    Ok((plan, trajectory))
}

pub fn plan_otc_fast(inst: &EvasionInstance) -> Result<ModificationPlan, EvasionError> {
    let candidates = otc_candidates(inst);
    let mut g = inst.graph.clone();
    let initial: BTreeMap<Edge, i64> = candidates
        .iter()
        .filter_map(|&e| {
            let (v, w) = e.endpoints();
            if otc_guard_trips(&g, &inst.hidden, v, w) {
                None
            } else {
                Some((e, otc_score(&g, v, w)))
            }
        })
        .collect();
    let mut queue = ScoreQueue::new(initial);
    let mut steps = Vec::new();
    for _ in 0..inst.budget {
        let Some((e, _)) = queue.peek_max() else { break };
        let (v, w) = e.endpoints();
        g.add_edge(e).expect("queued candidates are non-edges");
        queue.remove(e);
        // the new edge only changes scores and guards of candidates that
        // share an endpoint with it
        let updates: Vec<(Edge, Option<i64>)> = queue
            .score
            .keys()
            .filter(|c| c.touches(v) || c.touches(w))
            .map(|&c| {
                let u = if c.touches(v) { c.other(v) } else { c.other(w) };
                let anchor_mate = if c.touches(v) { w } else { v };
                let cross = Edge::new(u, anchor_mate);
                if inst.hidden.contains(&cross) {
                    (c, None) // the added edge makes anchor a common
                              // neighbor of the hidden pair (u, anchor_mate)
                } else if g.has_edge(cross) {
                    (c, Some(-1)) // anchor's new neighbor is already shared
                } else {
                    (c, Some(1)) // one more open triad around the candidate
                }
            })
            .collect();
        for (c, delta) in updates {
            match delta {
                Some(d) => queue.adjust(c, d),
                None => queue.remove(c),
            }
        }
        steps.push(PlanStep::Add(e));
    }
    Ok(ModificationPlan { steps })
}

/// Mixed strategy: odd steps attempt an OTC addition, even steps a CTR
/// removal; a stalled side yields its step to the other, and the run stops
/// when both stall.
pub fn run_alternating(
    inst: &EvasionInstance,
) -> Result<(ModificationPlan, Trajectory), EvasionError> {
    let plan = plan_alternating(inst)?;
    let trajectory = plan_trajectory(inst, &plan)?;
    Ok((plan, trajectory))
}

pub fn plan_alternating(inst: &EvasionInstance) -> Result<ModificationPlan, EvasionError> {
    let remove_candidates = ctr_candidates(inst);
    let mut add_candidates = otc_candidates(inst);
    let mut g = inst.graph.clone();
    let mut steps = Vec::new();
    for step_no in 1..=inst.budget {
        let otc_move = |g: &Graph, cands: &BTreeSet<Edge>| {
            cands
                .iter()
                .filter_map(|&e| {
                    let (v, w) = e.endpoints();
                    if otc_guard_trips(g, &inst.hidden, v, w) {
                        None
                    } else {
                        Some((e, otc_score(g, v, w)))
                    }
                })
                .max_by_key(|&(e, s)| (s, Reverse(e)))
                .map(|(e, _)| e)
        };
        let ctr_move = |g: &Graph| {
            ctr_sigma(g, &inst.hidden, &remove_candidates)
                .into_iter()
                .max_by_key(|&(e, s)| (s, Reverse(e)))
                .filter(|&(_, s)| s > 0)
                .map(|(e, _)| e)
        };
        let want_add = step_no % 2 == 1;
        let step = if want_add {
            otc_move(&g, &add_candidates)
                .map(PlanStep::Add)
                .or_else(|| ctr_move(&g).map(PlanStep::Remove))
        } else {
            ctr_move(&g)
                .map(PlanStep::Remove)
                .or_else(|| otc_move(&g, &add_candidates).map(PlanStep::Add))
        };
        match step {
            Some(PlanStep::Add(e)) => {
                g.add_edge(e).expect("candidates are non-edges");
                add_candidates.remove(&e);
                steps.push(PlanStep::Add(e));
            }
            Some(PlanStep::Remove(e)) => {
                g.remove_edge(e).expect("sigma keys are current edges");
                steps.push(PlanStep::Remove(e));
            }
            None => break,
        }
    }
    Ok(ModificationPlan { steps })
}

fn materialize_addable(inst: &EvasionInstance) -> Vec<Edge> {
    match &inst.addable {
        CandidateSet::All => inst
            .graph
            .non_edges()
            .filter(|e| !inst.hidden.contains(e))
            .collect(),
        CandidateSet::Explicit(set) => set.iter().copied().collect(),
    }
}

fn materialize_removable(inst: &EvasionInstance) -> Vec<Edge> {
    match &inst.removable {
        CandidateSet::All => inst.graph.edges().collect(),
        CandidateSet::Explicit(set) => set.iter().copied().collect(),
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Exact minimizer of the instance metric over every feasible `(A, R)` with
/// `|A| + |R| ≤ b`. Subset sizes are explored in increasing order and, within
/// a size, combinations in lexicographic order over adds-then-removes, so a
/// tie keeps the first (lexicographically smallest) plan.
pub fn brute_force_optimum(
    inst: &EvasionInstance,
) -> Result<(ModificationPlan, f64), EvasionError> {
    if matches!(inst.scorer, Scorer::Global(_)) && inst.graph.node_count() > ORACLE_GLOBAL_NODE_LIMIT
    {
        return Err(EvasionError::GlobalTooLarge(inst.graph.node_count()));
    }
    let ops: Vec<PlanStep> = materialize_addable(inst)
        .into_iter()
        .map(PlanStep::Add)
        .chain(materialize_removable(inst).into_iter().map(PlanStep::Remove))
        .collect();
    let b = inst.budget.min(ops.len());
    let required: u128 = (0..=b as u128).map(|k| binomial(ops.len() as u128, k)).sum();
    if required > ORACLE_EVALUATION_CAP {
        return Err(EvasionError::SearchSpaceExceeded {
            required,
            cap: ORACLE_EVALUATION_CAP,
        });
    }

    let mut best_plan = ModificationPlan::default();
    let mut best_value = evaluate_plan(inst, &best_plan)?;
    let mut indices: Vec<usize> = Vec::new();
    for k in 1..=b {
        indices.clear();
        indices.extend(0..k);
        loop {
            let plan = ModificationPlan {
                steps: indices.iter().map(|&i| ops[i]).collect(),
            };
            let value = evaluate_plan(inst, &plan)?;
            if value < best_value {
                best_value = value;
                best_plan = plan;
            }
            // advance to the next k-combination of 0..ops.len()
            let mut i = k;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if indices[i] != i + ops.len() - k {
                    indices[i] += 1;
                    for j in i + 1..k {
                        indices[j] = indices[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    indices.clear();
                    break;
                }
            }
            if indices.is_empty() {
                break;
            }
        }
    }
    Ok((best_plan, best_value))
}

/// Parameters of the Γ(c,P) gadget: a universe `{u_1..u_m}`, a cover of
/// 3-element subsets, and the per-index constant `c` controlling how many
/// `a`-nodes attach to each `u_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetSpec {
    pub c: usize,
    /// m, the universe size; elements are `1..=m`.
    pub universe_size: usize,
    /// The cover sets `P_1..P_q` as subsets of `1..=m`.
    pub cover: Vec<Vec<usize>>,
}

impl GadgetSpec {
    fn validate(&self) -> Result<(), EvasionError> {
        let bad = |msg: String| Err(EvasionError::BadGadgetSpec(msg));
        if self.c == 0 {
            return bad("c must be positive".into());
        }
        if self.universe_size < 5 {
            return bad(format!("universe size {} < 5", self.universe_size));
        }
        if self.cover.is_empty() {
            return bad("cover is empty".into());
        }
        let mut union = BTreeSet::new();
        for (j, p) in self.cover.iter().enumerate() {
            let set: BTreeSet<usize> = p.iter().copied().collect();
            if set.len() != 3 || p.len() != 3 {
                return bad(format!("cover set {} must have exactly 3 elements", j + 1));
            }
            if let Some(&x) = set.iter().find(|&&x| x == 0 || x > self.universe_size) {
                return bad(format!("cover element {x} outside 1..={}", self.universe_size));
            }
            union.extend(set);
        }
        if union.len() != self.universe_size {
            return bad("cover does not cover the universe".into());
        }
        Ok(())
    }

    /// `P(u_i)`: how many cover sets contain element `i` (0 for `u_0`).
    fn membership_count(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.cover.iter().filter(|p| p.contains(&i)).count()
    }
}

/// Node ids of the gadget's named nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLabels {
    pub v0: NodeId,
    pub v1: NodeId,
    /// `u[i]` is the node `u_i`, for `i = 0..=m`.
    pub u: Vec<NodeId>,
    /// `p[j]` is the node `P_{j+1}`.
    pub p: Vec<NodeId>,
    /// `a[i]` are the `c` attachment nodes of `u_i`.
    pub a: Vec<Vec<NodeId>>,
    /// `d[i]` are the `q - |P(u_i)|` degree-padding nodes of `u_i`.
    pub d: Vec<Vec<NodeId>>,
}

/// Build the Γ(c,P) network.
///
/// Every `u_i` (including `u_0`) is wired to `v_1` and into the
/// `(m+1)`-clique, giving all `u_i` the same degree `m + q + c + 1`;
/// `a`-nodes link to `{u_i, v_0, v_1}` and `d`-nodes to `{u_i, v_1}`.
pub fn build_gamma(spec: &GadgetSpec) -> Result<(Graph, GadgetLabels), EvasionError> {
    spec.validate()?;
    let m = spec.universe_size;
    let q = spec.cover.len();
    let mut next = 0usize;
    let mut fresh = |count: usize| {
        let ids: Vec<NodeId> = (next..next + count).collect();
        next += count;
        ids
    };
    let v0 = fresh(1)[0];
    let v1 = fresh(1)[0];
    let u = fresh(m + 1);
    let p = fresh(q);
    let a: Vec<Vec<NodeId>> = (0..=m).map(|_| fresh(spec.c)).collect();
    let d: Vec<Vec<NodeId>> = (0..=m)
        .map(|i| fresh(q - spec.membership_count(i)))
        .collect();

    let mut g = Graph::new(next);
    let mut add = |x: NodeId, y: NodeId| {
        g.add_edge(Edge::new(x, y)).expect("gadget edges are distinct");
    };
    for (j, set) in spec.cover.iter().enumerate() {
        add(p[j], v1);
        for &i in set {
            add(p[j], u[i]);
        }
    }
    for i in 0..=m {
        add(u[i], v1);
        for j in i + 1..=m {
            add(u[i], u[j]);
        }
        for &node in &a[i] {
            add(node, u[i]);
            add(node, v0);
            add(node, v1);
        }
        for &node in &d[i] {
            add(node, u[i]);
            add(node, v1);
        }
    }
    Ok((g, GadgetLabels { v0, v1, u, p, a, d }))
}

/// The constant used by the hardness proof for each local index.
pub fn proof_constant(kind: LocalIndexKind) -> usize {
    use LocalIndexKind::*;
    match kind {
        CommonNeighbors => 6,
        AdamicAdar | ResourceAllocation => 3,
        _ => 1,
    }
}

/// Outcome of checking the three ranking claims on a built gadget.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Report {
    pub point_a: bool,
    pub point_b: bool,
    pub point_c: bool,
    pub counterexamples: Vec<String>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.point_a && self.point_b && self.point_c
    }
}

const LEMMA_EPS: f64 = 1e-9;

#[derive(PartialEq, Eq, Debug, Clone, Copy)]
enum Rel {
    Below,
    Equal,
    Above,
}

fn rel(x: f64, reference: f64) -> Rel {
    if x > reference + LEMMA_EPS {
        Rel::Above
    } else if x < reference - LEMMA_EPS {
        Rel::Below
    } else {
        Rel::Equal
    }
}

/// Check the three claims about how adding `A ⊆ {(P_j,v_0)}` moves the
/// hidden pair `(u_0,v_0)` in the similarity ranking:
///
/// * (a) every `(u_i,v_0)` ties `(u_0,v_0)` before the addition, and
///   afterwards strictly exceeds it exactly when some added set contains
///   `u_i`;
/// * (b) every un-added `(P_j,v_0)` stays strictly below `(u_0,v_0)`;
/// * (c) every other non-edge keeps its relation to `(u_0,v_0)`.
///
/// `added` holds 1-based cover-set indices. The spec's constant must be the
/// proof constant for `kind`.
pub fn verify_lemma1(
    spec: &GadgetSpec,
    kind: LocalIndexKind,
    added: &[usize],
) -> Result<Lemma1Report, EvasionError> {
    let expected = proof_constant(kind);
    if spec.c != expected {
        return Err(EvasionError::WrongConstant {
            kind,
            given: spec.c,
            expected,
        });
    }
    let (base, labels) = build_gamma(spec)?;
    let q = spec.cover.len();
    for &j in added {
        if j == 0 || j > q {
            return Err(EvasionError::BadGadgetSpec(format!(
                "added set index {j} outside 1..={q}"
            )));
        }
    }
    let mut after = base.clone();
    let added_edges: BTreeSet<Edge> = added
        .iter()
        .map(|&j| Edge::new(labels.p[j - 1], labels.v0))
        .collect();
    for &e in &added_edges {
        after.add_edge(e).map_err(|err| {
            EvasionError::BadGadgetSpec(format!("cannot add {e}: {err}"))
        })?;
    }

    let score = |g: &Graph, e: Edge| {
        crate::local::local_score(g, e, kind).expect("gadget pair is a non-edge")
    };
    let m = spec.universe_size;
    let hidden = Edge::new(labels.u[0], labels.v0);
    let s0_base = score(&base, hidden);
    let s0_after = score(&after, hidden);

    let mut report = Lemma1Report {
        point_a: true,
        point_b: true,
        point_c: true,
        counterexamples: Vec::new(),
    };
    let covered: BTreeSet<usize> = added
        .iter()
        .flat_map(|&j| spec.cover[j - 1].iter().copied())
        .collect();

    for i in 0..=m {
        let e = Edge::new(labels.u[i], labels.v0);
        if rel(score(&base, e), s0_base) != Rel::Equal {
            report.point_a = false;
            report.counterexamples.push(format!("(a) pre: u_{i}"));
        }
        let want = if i >= 1 && covered.contains(&i) {
            Rel::Above
        } else {
            Rel::Equal
        };
        if rel(score(&after, e), s0_after) != want {
            report.point_a = false;
            report.counterexamples.push(format!("(a) post: u_{i}"));
        }
    }

    for j in 1..=q {
        let e = Edge::new(labels.p[j - 1], labels.v0);
        if rel(score(&base, e), s0_base) != Rel::Below {
            report.point_b = false;
            report.counterexamples.push(format!("(b) pre: P_{j}"));
        }
        if !added_edges.contains(&e) && rel(score(&after, e), s0_after) != Rel::Below {
            report.point_b = false;
            report.counterexamples.push(format!("(b) post: P_{j}"));
        }
    }

    let special: BTreeSet<Edge> = (0..=m)
        .map(|i| Edge::new(labels.u[i], labels.v0))
        .chain((1..=q).map(|j| Edge::new(labels.p[j - 1], labels.v0)))
        .collect();
    for e in after.non_edges() {
        if special.contains(&e) {
            continue;
        }
        if rel(score(&base, e), s0_base) != rel(score(&after, e), s0_after) {
            report.point_c = false;
            report.counterexamples.push(format!("(c) {e}"));
        }
    }
    Ok(report)
}
