//! Experiment harness: repeatable attack experiments over generated or
//! loaded networks, aggregated into plot-ready CSV.
//!
//! Every repetition owns an RNG substream derived from the master seed, so a
//! config runs to byte-identical CSV regardless of how repetitions are
//! scheduled. The heuristics are structural (they never consult the
//! similarity index), so each repetition computes one modification plan and
//! evaluates it under every requested index.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::evasion::{
    evaluate_graph, plan_alternating, plan_ctr_pq, plan_otc_fast, plan_trajectory, CandidateSet,
    EvasionError, EvasionInstance, Metric, ModificationPlan, Scorer, Trajectory, TrajectoryPoint,
};
use crate::generators::{generate_stream, substream_rng, GeneratorError, GeneratorModel};
use crate::graph::{load_edge_list, Edge, EdgeListError, Graph, NodeId};
use crate::local::ParseIndexError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Evasion(#[from] EvasionError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    EdgeList(#[from] EdgeListError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    ParseIndex(#[from] ParseIndexError),
    #[error("cannot parse '{text}' as {what}")]
    BadField { what: &'static str, text: String },
    #[error("hidden strategy infeasible: {0}")]
    Infeasible(String),
    #[error("config file line {line} is not key=value: '{text}'")]
    BadConfigLine { line: usize, text: String },
}

/// Where the network comes from: a generator spec string or an edge-list
/// file path.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    Model(GeneratorModel),
    File(PathBuf),
}

impl NetworkSource {
    /// The observed network for one repetition. Generated models use the
    /// given substream; files load the same graph for every repetition.
    fn realize(&self, seed: u64, stream: u64) -> Result<Graph, HarnessError> {
        match self {
            NetworkSource::Model(m) => Ok(generate_stream(*m, seed, stream)?),
            NetworkSource::File(p) => Ok(load_edge_list(p)?.graph),
        }
    }

    pub fn label(&self) -> String {
        match self {
            NetworkSource::Model(m) => m.to_string(),
            NetworkSource::File(p) => p.display().to_string(),
        }
    }
}

impl FromStr for NetworkSource {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(model) = s.parse::<GeneratorModel>() {
            return Ok(NetworkSource::Model(model));
        }
        if s.contains(':') {
            // looks like a malformed model spec, not a path
            return Err(HarnessError::BadField {
                what: "network source",
                text: s.to_string(),
            });
        }
        Ok(NetworkSource::File(PathBuf::from(s)))
    }
}

/// How the hidden set is chosen for a repetition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HiddenStrategy {
    /// Sample from `E`, delete the sampled edges from the observed graph,
    /// and use them as `H` (the default; hidden relations exist but are
    /// unseen).
    RemoveRandomEdges,
    /// Sample `H` uniformly from the non-edges.
    RandomNonEdges,
    /// Rank non-edges by the experiment's first index and sample `H` from
    /// the top `k`.
    TopRankedNonEdges(usize),
}

impl FromStr for HiddenStrategy {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "remove-random-edges" => Ok(HiddenStrategy::RemoveRandomEdges),
            "random-nonedges" => Ok(HiddenStrategy::RandomNonEdges),
            other => {
                if let Some(k) = other.strip_prefix("top-ranked-nonedges:") {
                    let k = k.parse().map_err(|_| HarnessError::BadField {
                        what: "hidden strategy",
                        text: s.to_string(),
                    })?;
                    return Ok(HiddenStrategy::TopRankedNonEdges(k));
                }
                Err(HarnessError::BadField {
                    what: "hidden strategy",
                    text: s.to_string(),
                })
            }
        }
    }
}

impl std::fmt::Display for HiddenStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HiddenStrategy::RemoveRandomEdges => f.write_str("remove-random-edges"),
            HiddenStrategy::RandomNonEdges => f.write_str("random-nonedges"),
            HiddenStrategy::TopRankedNonEdges(k) => write!(f, "top-ranked-nonedges:{k}"),
        }
    }
}

/// An explicit count or the `paper` rule (`max(10, |E|/100)` for the hidden
/// size, `4|H|` for the budget).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountRule {
    Explicit(usize),
    Paper,
}

impl CountRule {
    pub fn hidden_size(&self, edge_count: usize) -> usize {
        match *self {
            CountRule::Explicit(k) => k,
            CountRule::Paper => 10.max(edge_count / 100),
        }
    }

    pub fn budget(&self, hidden_size: usize) -> usize {
        match *self {
            CountRule::Explicit(b) => b,
            CountRule::Paper => 4 * hidden_size,
        }
    }
}

impl FromStr for CountRule {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "paper" {
            return Ok(CountRule::Paper);
        }
        s.parse()
            .map(CountRule::Explicit)
            .map_err(|_| HarnessError::BadField {
                what: "count rule",
                text: s.to_string(),
            })
    }
}

impl std::fmt::Display for CountRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountRule::Explicit(k) => write!(f, "{k}"),
            CountRule::Paper => f.write_str("paper"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicKind {
    Ctr,
    Otc,
    Alt,
}

impl HeuristicKind {
    pub fn name(&self) -> &'static str {
        match self {
            HeuristicKind::Ctr => "ctr",
            HeuristicKind::Otc => "otc",
            HeuristicKind::Alt => "alt",
        }
    }

    fn plan(&self, inst: &EvasionInstance) -> Result<ModificationPlan, EvasionError> {
        match self {
            HeuristicKind::Ctr => plan_ctr_pq(inst),
            HeuristicKind::Otc => plan_otc_fast(inst),
            HeuristicKind::Alt => plan_alternating(inst),
        }
    }
}

impl FromStr for HeuristicKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ctr" => Ok(HeuristicKind::Ctr),
            "otc" => Ok(HeuristicKind::Otc),
            "alt" => Ok(HeuristicKind::Alt),
            _ => Err(HarnessError::BadField {
                what: "heuristic",
                text: s.to_string(),
            }),
        }
    }
}

/// Shared experiment settings.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub network: NetworkSource,
    pub indices: Vec<Scorer>,
    pub heuristic: HeuristicKind,
    pub hidden_strategy: HiddenStrategy,
    pub hidden_size: CountRule,
    pub budget: CountRule,
    pub reps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn mean_ci(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * (var / n).sqrt())
}

/// Sample a hidden set for one repetition, mutating the observed graph when
/// the strategy removes edges.
pub fn select_hidden(
    g: &mut Graph,
    strategy: HiddenStrategy,
    size: usize,
    ranking_index: Scorer,
    rng: &mut ChaCha8Rng,
) -> Result<BTreeSet<Edge>, HarnessError> {
    if size == 0 {
        return Err(HarnessError::Infeasible("hidden size is 0".into()));
    }
    match strategy {
        HiddenStrategy::RemoveRandomEdges => {
            if g.edge_count() < size {
                return Err(HarnessError::Infeasible(format!(
                    "{} edges available, {size} hidden requested",
                    g.edge_count()
                )));
            }
            let edges: Vec<Edge> = g.edges().collect();
            let hidden: BTreeSet<Edge> = sample(rng, edges.len(), size)
                .into_iter()
                .map(|i| edges[i])
                .collect();
            for &e in &hidden {
                g.remove_edge(e).expect("sampled from the edge set");
            }
            Ok(hidden)
        }
        HiddenStrategy::RandomNonEdges => {
            if g.non_edge_count() < size {
                return Err(HarnessError::Infeasible(format!(
                    "{} non-edges available, {size} hidden requested",
                    g.non_edge_count()
                )));
            }
            let n = g.node_count();
            let mut hidden = BTreeSet::new();
            while hidden.len() < size {
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                if a == b {
                    continue;
                }
                let e = Edge::new(a, b);
                if !g.has_edge(e) {
                    hidden.insert(e);
                }
            }
            Ok(hidden)
        }
        HiddenStrategy::TopRankedNonEdges(k) => {
            let mut scored = crate::evasion::score_nonedges(g, ranking_index)?;
            if scored.len() < k || k < size {
                return Err(HarnessError::Infeasible(format!(
                    "top-{k} of {} non-edges cannot supply {size} hidden pairs",
                    scored.len()
                )));
            }
            scored.sort_by(|(ea, sa), (eb, sb)| {
                sb.partial_cmp(sa).expect("scores are not NaN").then(ea.cmp(eb))
            });
            let top: Vec<Edge> = scored[..k].iter().map(|&(e, _)| e).collect();
            Ok(sample(rng, k, size).into_iter().map(|i| top[i]).collect())
        }
    }
}

/// Extend a (possibly early-stopped) trajectory to `budget + 1` points by
/// repeating the last value.
fn forward_fill(t: &Trajectory, budget: usize) -> Vec<TrajectoryPoint> {
    let mut points = t.points.clone();
    while points.len() < budget + 1 {
        let mut last = *points.last().expect("trajectory has a point 0");
        last.iteration = points.len();
        points.push(last);
    }
    points
}

/// One repetition's outcome: the plan and a forward-filled trajectory per
/// index.
#[derive(Debug, Clone)]
pub struct RepOutcome {
    pub rep: usize,
    pub plan: ModificationPlan,
    /// Parallel to the config's index list.
    pub trajectories: Vec<Vec<TrajectoryPoint>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AggregatedPoint {
    pub iteration: usize,
    pub auc_mean: f64,
    pub auc_ci: f64,
    pub ap_mean: f64,
    pub ap_ci: f64,
}

/// Cross-repetition mean and 95% confidence half-width per iteration, per
/// index.
#[derive(Debug, Clone)]
pub struct AggregatedTrajectory {
    pub index: String,
    pub points: Vec<AggregatedPoint>,
}

#[derive(Debug, Clone)]
pub struct TrajectoryExperiment {
    pub per_rep: Vec<RepOutcome>,
    pub aggregated: Vec<AggregatedTrajectory>,
    pub csv: String,
}

fn run_one_rep(
    cfg: &ExperimentConfig,
    rep: usize,
    budget_cap: Option<usize>,
) -> Result<RepOutcome, HarnessError> {
    let mut g = cfg.network.realize(cfg.seed, 2 * rep as u64)?;
    let mut rng = substream_rng(cfg.seed, 2 * rep as u64 + 1);
    let size = cfg.hidden_size.hidden_size(g.edge_count());
    let hidden = select_hidden(&mut g, cfg.hidden_strategy, size, cfg.indices[0], &mut rng)?;
    let mut budget = cfg.budget.budget(hidden.len());
    if let Some(cap) = budget_cap {
        budget = budget.min(cap);
    }
    let inst = EvasionInstance::new(
        g,
        cfg.indices[0],
        Metric::Auc,
        hidden,
        budget,
        CandidateSet::All,
        CandidateSet::All,
    )?;
    let plan = cfg.heuristic.plan(&inst)?;
    let mut trajectories = Vec::with_capacity(cfg.indices.len());
    for &index in &cfg.indices {
        let mut scoped = inst.clone();
        scoped.scorer = index;
        let t = plan_trajectory(&scoped, &plan)?;
        trajectories.push(forward_fill(&t, budget));
    }
    Ok(RepOutcome {
        rep,
        plan,
        trajectories,
    })
}

/// The per-iteration attack trajectory protocol: run the heuristic once per
/// repetition, evaluate every index after every step, aggregate across
/// repetitions.
pub fn run_trajectory_experiment(cfg: &ExperimentConfig) -> Result<TrajectoryExperiment, HarnessError> {
    let per_rep: Vec<RepOutcome> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| run_one_rep(cfg, rep, None))
        .collect::<Result<_, _>>()?;
    let max_len = per_rep
        .iter()
        .flat_map(|r| r.trajectories.iter().map(|t| t.len()))
        .max()
        .unwrap_or(1);

    let mut aggregated = Vec::new();
    let mut csv = String::from(
        "network,heuristic,hidden,hidden_size,budget,seed,reps,index,iteration,auc_mean,auc_ci,ap_mean,ap_ci\n",
    );
    for (i, &index) in cfg.indices.iter().enumerate() {
        let mut points = Vec::with_capacity(max_len);
        for it in 0..max_len {
            let grab = |f: fn(&TrajectoryPoint) -> f64| -> Vec<f64> {
                per_rep
                    .iter()
                    .map(|r| {
                        let t = &r.trajectories[i];
                        f(t.get(it).unwrap_or_else(|| t.last().expect("nonempty")))
                    })
                    .collect()
            };
            let (auc_mean, auc_ci) = mean_ci(&grab(|p| p.auc));
            let (ap_mean, ap_ci) = mean_ci(&grab(|p| p.ap));
            points.push(AggregatedPoint {
                iteration: it,
                auc_mean,
                auc_ci,
                ap_mean,
                ap_ci,
            });
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                cfg.network.label(),
                cfg.heuristic.name(),
                cfg.hidden_strategy,
                cfg.hidden_size,
                cfg.budget,
                cfg.seed,
                cfg.reps,
                index,
                it,
                auc_mean,
                auc_ci,
                ap_mean,
                ap_ci
            ));
        }
        aggregated.push(AggregatedTrajectory {
            index: index.to_string(),
            points,
        });
    }
    if let Some(path) = &cfg.out {
        std::fs::write(path, &csv)?;
    }
    Ok(TrajectoryExperiment {
        per_rep,
        aggregated,
        csv,
    })
}

/// Which generator family a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepModel {
    ScaleFree,
    SmallWorld { p: f64 },
    RandomGraph,
}

impl SweepModel {
    fn instantiate(&self, n: usize, d: usize) -> GeneratorModel {
        match *self {
            SweepModel::ScaleFree => GeneratorModel::ScaleFree { n, d },
            SweepModel::SmallWorld { p } => GeneratorModel::SmallWorld { n, d, p },
            SweepModel::RandomGraph => GeneratorModel::RandomGraph { n, d: d as f64 },
        }
    }
}

impl FromStr for SweepModel {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sf" => Ok(SweepModel::ScaleFree),
            "er" => Ok(SweepModel::RandomGraph),
            other => {
                if let Some(p) = other.strip_prefix("sw:") {
                    let p = p.parse().map_err(|_| HarnessError::BadField {
                        what: "sweep model",
                        text: s.to_string(),
                    })?;
                    return Ok(SweepModel::SmallWorld { p });
                }
                Err(HarnessError::BadField {
                    what: "sweep model",
                    text: s.to_string(),
                })
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub model: SweepModel,
    pub ns: Vec<usize>,
    pub ds: Vec<usize>,
    pub indices: Vec<Scorer>,
    pub heuristic: HeuristicKind,
    pub hidden_strategy: HiddenStrategy,
    pub hidden_size: CountRule,
    pub budget: CountRule,
    pub reps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// Relative metric change for one sweep cell, averaged over repetitions.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub n: usize,
    pub d: usize,
    pub index: String,
    pub auc_rel_mean: f64,
    pub auc_rel_ci: f64,
    pub ap_rel_mean: f64,
    pub ap_rel_ci: f64,
}

#[derive(Debug, Clone)]
pub struct SweepExperiment {
    pub cells: Vec<SweepCell>,
    pub csv: String,
}

fn relative_change(initial: f64, fin: f64) -> f64 {
    // a zero initial metric cannot arise from a nonempty scored probe set
    // in practice; define the guard anyway
    if initial == 0.0 {
        0.0
    } else {
        (fin - initial) / initial
    }
}

/// The attack-tolerance sweep: relative AUC/AP change per (n, d, index)
/// cell, plus marginal sections averaging over d per n and over n per d.
pub fn run_tolerance_sweep(cfg: &SweepConfig) -> Result<SweepExperiment, HarnessError> {
    struct CellJob {
        cell_no: usize,
        n: usize,
        d: usize,
    }
    let jobs: Vec<CellJob> = cfg
        .ns
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| {
            cfg.ds.iter().enumerate().map(move |(j, &d)| CellJob {
                cell_no: i * cfg.ds.len() + j,
                n,
                d,
            })
        })
        .collect();

    let cells: Vec<Vec<SweepCell>> = jobs
        .par_iter()
        .map(|job| -> Result<Vec<SweepCell>, HarnessError> {
            // per-rep, per-index (auc_rel, ap_rel)
            let outcomes: Vec<Vec<(f64, f64)>> = (0..cfg.reps)
                .into_par_iter()
                .map(|rep| -> Result<Vec<(f64, f64)>, HarnessError> {
                    let stream = (job.cell_no * cfg.reps + rep) as u64;
                    let model = cfg.model.instantiate(job.n, job.d);
                    let mut g = generate_stream(model, cfg.seed, 2 * stream)?;
                    let mut rng = substream_rng(cfg.seed, 2 * stream + 1);
                    let size = cfg.hidden_size.hidden_size(g.edge_count());
                    let hidden =
                        select_hidden(&mut g, cfg.hidden_strategy, size, cfg.indices[0], &mut rng)?;
                    let budget = cfg.budget.budget(hidden.len());
                    let inst = EvasionInstance::new(
                        g,
                        cfg.indices[0],
                        Metric::Auc,
                        hidden.clone(),
                        budget,
                        CandidateSet::All,
                        CandidateSet::All,
                    )?;
                    let plan = cfg.heuristic.plan(&inst)?;
                    let mut modified = inst.graph.clone();
                    for &step in &plan.steps {
                        match step {
                            crate::evasion::PlanStep::Add(e) => modified.add_edge(e).unwrap(),
                            crate::evasion::PlanStep::Remove(e) => modified.remove_edge(e).unwrap(),
                        }
                    }
                    cfg.indices
                        .iter()
                        .map(|&index| {
                            let before = evaluate_graph(&inst.graph, index, &hidden)?;
                            let after = evaluate_graph(&modified, index, &hidden)?;
                            Ok((
                                relative_change(before.auc, after.auc),
                                relative_change(before.ap, after.ap),
                            ))
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            Ok(cfg
                .indices
                .iter()
                .enumerate()
                .map(|(i, index)| {
                    let aucs: Vec<f64> = outcomes.iter().map(|o| o[i].0).collect();
                    let aps: Vec<f64> = outcomes.iter().map(|o| o[i].1).collect();
                    let (auc_rel_mean, auc_rel_ci) = mean_ci(&aucs);
                    let (ap_rel_mean, ap_rel_ci) = mean_ci(&aps);
                    SweepCell {
                        n: job.n,
                        d: job.d,
                        index: index.to_string(),
                        auc_rel_mean,
                        auc_rel_ci,
                        ap_rel_mean,
                        ap_rel_ci,
                    }
                })
                .collect())
        })
        .collect::<Result<_, _>>()?;
    let cells: Vec<SweepCell> = cells.into_iter().flatten().collect();

    let mut csv = String::from("section,n,d,index,heuristic,seed,reps,auc_rel_mean,auc_rel_ci,ap_rel_mean,ap_rel_ci\n");
    for c in &cells {
        csv.push_str(&format!(
            "cell,{},{},{},{},{},{},{},{},{},{}\n",
            c.n,
            c.d,
            c.index,
            cfg.heuristic.name(),
            cfg.seed,
            cfg.reps,
            c.auc_rel_mean,
            c.auc_rel_ci,
            c.ap_rel_mean,
            c.ap_rel_ci
        ));
    }
    // marginal over d for each n, then over n for each d
    let index_names: Vec<String> = cfg.indices.iter().map(|i| i.to_string()).collect();
    let marginal = |csv: &mut String, by_n: bool| {
        let keys: &[usize] = if by_n { &cfg.ns } else { &cfg.ds };
        for &key in keys {
            for index in &index_names {
                let group: Vec<&SweepCell> = cells
                    .iter()
                    .filter(|c| (if by_n { c.n } else { c.d }) == key && &c.index == index)
                    .collect();
                let auc = group.iter().map(|c| c.auc_rel_mean).sum::<f64>() / group.len() as f64;
                let ap = group.iter().map(|c| c.ap_rel_mean).sum::<f64>() / group.len() as f64;
                let (section, n, d) = if by_n {
                    ("marginal_over_d", key.to_string(), String::new())
                } else {
                    ("marginal_over_n", String::new(), key.to_string())
                };
                csv.push_str(&format!(
                    "{section},{n},{d},{index},{},{},{},{auc},,{ap},\n",
                    cfg.heuristic.name(),
                    cfg.seed,
                    cfg.reps
                ));
            }
        }
    };
    marginal(&mut csv, true);
    marginal(&mut csv, false);

    if let Some(path) = &cfg.out {
        std::fs::write(path, &csv)?;
    }
    Ok(SweepExperiment { cells, csv })
}

#[derive(Debug, Clone)]
pub struct SingleLinkConfig {
    pub network: NetworkSource,
    pub indices: Vec<Scorer>,
    pub heuristic: HeuristicKind,
    /// How many top-ranked non-edges to attack (1000 by default).
    pub top_k: usize,
    pub budget: usize,
    pub reps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SingleLinkExperiment {
    /// Aggregated per index over all `2k × reps` runs.
    pub aggregated: Vec<AggregatedTrajectory>,
    pub csv: String,
    /// Every step of every plan touched its designated evader node.
    pub evader_incidence_ok: bool,
}

/// Pairs incident to `evader`, split into addable non-edges (minus the
/// hidden pair) and removable edges.
fn evader_action_space(g: &Graph, evader: NodeId, hidden: Edge) -> (CandidateSet, CandidateSet) {
    let mut addable = BTreeSet::new();
    for v in 0..g.node_count() {
        if v == evader {
            continue;
        }
        let e = Edge::new(evader, v);
        if !g.has_edge(e) && e != hidden {
            addable.insert(e);
        }
    }
    let removable: BTreeSet<Edge> = g
        .neighbors(evader)
        .iter()
        .map(|&v| Edge::new(evader, v))
        .collect();
    (
        CandidateSet::Explicit(addable),
        CandidateSet::Explicit(removable),
    )
}

/// The single-link scenario: hide each of the `k` highest-ranked non-edges
/// one at a time, once per endpoint as the evader, with the evader's action
/// space restricted to its own incident pairs.
pub fn run_single_link_scenario(cfg: &SingleLinkConfig) -> Result<SingleLinkExperiment, HarnessError> {
    struct RunResult {
        trajectories: Vec<Vec<TrajectoryPoint>>,
        evader_ok: bool,
    }
    let runs: Vec<RunResult> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| -> Result<Vec<RunResult>, HarnessError> {
            let g = cfg.network.realize(cfg.seed, rep as u64)?;
            let mut scored = crate::evasion::score_nonedges(&g, cfg.indices[0])?;
            if scored.len() <= cfg.top_k {
                return Err(HarnessError::Infeasible(format!(
                    "top-{} requested, only {} non-edges (one must remain unhidden)",
                    cfg.top_k,
                    scored.len()
                )));
            }
            scored.sort_by(|(ea, sa), (eb, sb)| {
                sb.partial_cmp(sa).expect("scores are not NaN").then(ea.cmp(eb))
            });
            let targets: Vec<Edge> = scored[..cfg.top_k].iter().map(|&(e, _)| e).collect();
            let mut out = Vec::with_capacity(2 * cfg.top_k);
            for target in targets {
                for evader in [target.smaller(), target.larger()] {
                    let (addable, removable) = evader_action_space(&g, evader, target);
                    let hidden: BTreeSet<Edge> = [target].into_iter().collect();
                    let inst = EvasionInstance::new(
                        g.clone(),
                        cfg.indices[0],
                        Metric::Auc,
                        hidden,
                        cfg.budget,
                        addable,
                        removable,
                    )?;
                    let plan = cfg.heuristic.plan(&inst)?;
                    let evader_ok = plan.steps.iter().all(|s| s.edge().touches(evader));
                    let mut trajectories = Vec::with_capacity(cfg.indices.len());
                    for &index in &cfg.indices {
                        let mut scoped = inst.clone();
                        scoped.scorer = index;
                        let t = plan_trajectory(&scoped, &plan)?;
                        trajectories.push(forward_fill(&t, cfg.budget));
                    }
                    out.push(RunResult {
                        trajectories,
                        evader_ok,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let evader_incidence_ok = runs.iter().all(|r| r.evader_ok);
    let mut aggregated = Vec::new();
    let mut csv = String::from(
        "network,heuristic,top_k,budget,seed,reps,index,iteration,auc_mean,auc_ci,ap_mean,ap_ci\n",
    );
    for (i, &index) in cfg.indices.iter().enumerate() {
        let mut points = Vec::with_capacity(cfg.budget + 1);
        for it in 0..=cfg.budget {
            let aucs: Vec<f64> = runs.iter().map(|r| r.trajectories[i][it].auc).collect();
            let aps: Vec<f64> = runs.iter().map(|r| r.trajectories[i][it].ap).collect();
            let (auc_mean, auc_ci) = mean_ci(&aucs);
            let (ap_mean, ap_ci) = mean_ci(&aps);
            points.push(AggregatedPoint {
                iteration: it,
                auc_mean,
                auc_ci,
                ap_mean,
                ap_ci,
            });
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                cfg.network.label(),
                cfg.heuristic.name(),
                cfg.top_k,
                cfg.budget,
                cfg.seed,
                cfg.reps,
                index,
                it,
                auc_mean,
                auc_ci,
                ap_mean,
                ap_ci
            ));
        }
        aggregated.push(AggregatedTrajectory {
            index: index.to_string(),
            points,
        });
    }
    if let Some(path) = &cfg.out {
        std::fs::write(path, &csv)?;
    }
    Ok(SingleLinkExperiment {
        aggregated,
        csv,
        evader_incidence_ok,
    })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub model: SweepModel,
    pub ns: Vec<usize>,
    pub d: usize,
    pub heuristics: Vec<HeuristicKind>,
    pub hidden_size: usize,
    pub budget: usize,
    pub reps: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub model: String,
    pub n: usize,
    pub heuristic: &'static str,
    pub seconds_mean: f64,
    pub seconds_ci: f64,
}

#[derive(Debug, Clone)]
pub struct BenchExperiment {
    pub rows: Vec<BenchRow>,
    pub csv: String,
}

/// Wall-clock runtime of the heuristic core (plan computation only; no
/// metric evaluation), per network size.
pub fn run_runtime_benchmark(cfg: &BenchConfig) -> Result<BenchExperiment, HarnessError> {
    let mut rows = Vec::new();
    for (ni, &n) in cfg.ns.iter().enumerate() {
        let model = cfg.model.instantiate(n, cfg.d);
        for &heuristic in &cfg.heuristics {
            let mut seconds = Vec::with_capacity(cfg.reps);
            for rep in 0..cfg.reps {
                let stream = (ni * cfg.reps + rep) as u64;
                let mut g = generate_stream(model, cfg.seed, 2 * stream)?;
                let mut rng = substream_rng(cfg.seed, 2 * stream + 1);
                let hidden = select_hidden(
                    &mut g,
                    HiddenStrategy::RemoveRandomEdges,
                    cfg.hidden_size,
                    Scorer::Local(crate::local::LocalIndexKind::CommonNeighbors),
                    &mut rng,
                )?;
                let inst = EvasionInstance::new(
                    g,
                    Scorer::Local(crate::local::LocalIndexKind::CommonNeighbors),
                    Metric::Auc,
                    hidden,
                    cfg.budget,
                    CandidateSet::All,
                    CandidateSet::All,
                )?;
                let start = Instant::now();
                let _plan = heuristic.plan(&inst)?;
                seconds.push(start.elapsed().as_secs_f64());
            }
            let (seconds_mean, seconds_ci) = mean_ci(&seconds);
            rows.push(BenchRow {
                model: model.to_string(),
                n,
                heuristic: heuristic.name(),
                seconds_mean,
                seconds_ci,
            });
        }
    }
    let mut csv = String::from("model,n,heuristic,hidden_size,budget,seed,reps,seconds_mean,seconds_ci\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.model,
            r.n,
            r.heuristic,
            cfg.hidden_size,
            cfg.budget,
            cfg.seed,
            cfg.reps,
            r.seconds_mean,
            r.seconds_ci
        ));
    }
    if let Some(path) = &cfg.out {
        std::fs::write(path, &csv)?;
    }
    Ok(BenchExperiment { rows, csv })
}

/// Parse a key=value config file; later occurrences of a key win.
pub fn parse_config_file(path: &Path) -> Result<Vec<(String, String)>, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| HarnessError::BadConfigLine {
            line: i + 1,
            text: raw.to_string(),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}
