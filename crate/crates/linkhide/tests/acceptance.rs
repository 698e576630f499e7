//! Acceptance suite: eleven checks covering index correctness, metric
//! correctness, heuristic equivalence, oracle dominance, the hardness
//! gadget, and the experiment harness. Each test ends with a single
//! pass line (visible with `--nocapture`).

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use linkhide::evasion::{
    brute_force_optimum, build_gamma, evaluate_plan, plan_alternating, plan_ctr_pq, plan_otc_fast,
    proof_constant, run_ctr, run_ctr_pq, run_otc, run_otc_fast, verify_lemma1, CandidateSet,
    EvasionInstance, GadgetSpec, Metric, ModificationPlan, PlanStep, Scorer,
};
use linkhide::generators::substream_rng;
use linkhide::graph::{graph_from_edges, Edge, Graph};
use linkhide::harness::{
    run_runtime_benchmark, run_tolerance_sweep, run_trajectory_experiment, BenchConfig,
    CountRule, ExperimentConfig, HeuristicKind, HiddenStrategy, SweepConfig, SweepModel,
};
use linkhide::local::{factor_profile, local_score, LocalIndexKind, ALL_LOCAL_INDICES};
use linkhide::metrics::{auc, average_precision, ScoredRanking};

const EPS: f64 = 1e-12;

fn pass(name: &str) {
    println!("acceptance {name}: pass");
}

/// Erdős–Rényi G(n,p) sample, used as the random-case generator throughout.
fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                g.add_edge(Edge::new(a, b)).unwrap();
            }
        }
    }
    g
}

fn sample_nonedges(g: &Graph, k: usize, rng: &mut ChaCha8Rng) -> BTreeSet<Edge> {
    let n = g.node_count();
    let mut out = BTreeSet::new();
    let mut attempts = 0;
    while out.len() < k && attempts < 20_000 {
        attempts += 1;
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            let e = Edge::new(a, b);
            if !g.has_edge(e) {
                out.insert(e);
            }
        }
    }
    out
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

/// Straight transcription of the nine index formulas, written against raw
/// neighbor sets so it shares no code with the library implementation.
fn reference_local(g: &Graph, e: Edge, kind: LocalIndexKind) -> f64 {
    let (v, w) = e.endpoints();
    let nv: HashSet<usize> = g.neighbors(v).iter().copied().collect();
    let nw: HashSet<usize> = g.neighbors(w).iter().copied().collect();
    let mut common: Vec<usize> = nv.intersection(&nw).copied().collect();
    common.sort_unstable();
    let cn = common.len() as f64;
    let dv = nv.len() as f64;
    let dw = nw.len() as f64;
    if common.is_empty() {
        return 0.0;
    }
    use LocalIndexKind::*;
    match kind {
        CommonNeighbors => cn,
        Salton => cn / (dv * dw).sqrt(),
        Jaccard => cn / (dv + dw - cn),
        Sorensen => 2.0 * cn / (dv + dw),
        HubPromoted => cn / dv.min(dw),
        HubDepressed => cn / dv.max(dw),
        LeichtHolmeNewman => cn / (dv * dw),
        AdamicAdar => common.iter().map(|&u| 1.0 / (g.degree(u) as f64).ln()).sum(),
        ResourceAllocation => common.iter().map(|&u| 1.0 / g.degree(u) as f64).sum(),
    }
}

#[test]
fn local_index_values() {
    // hand-derived values on the path 0-1-2-3, non-edge (0,2)
    let g = graph_from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
    let e = Edge::new(0, 2);
    let expected = [
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
    for (kind, want) in expected {
        let got = local_score(&g, e, kind).unwrap();
        assert!((got - want).abs() <= EPS, "{kind}: got {got}, want {want}");
    }

    // 200 random graphs against the independent evaluator
    let mut rng = substream_rng(11, 0);
    for _ in 0..200 {
        let n = rng.random_range(3..=30);
        let p = rng.random_range(0.1..0.9);
        let g = gnp(&mut rng, n, p);
        for e in g.non_edges() {
            for kind in ALL_LOCAL_INDICES {
                let got = local_score(&g, e, kind).unwrap();
                let want = reference_local(&g, e, kind);
                assert!(
                    (got - want).abs() <= EPS,
                    "{kind} on {e}: got {got}, want {want}"
                );
            }
        }
    }
    pass("1 local-index-values");
}

#[test]
fn removal_monotonicity() {
    // removing an edge (v,w) with v a neighbor of x never raises s(x,w)
    let mut rng = substream_rng(12, 0);
    let mut done = 0;
    while done < 1000 {
        let n = rng.random_range(6..=16);
        let p = rng.random_range(0.2..0.5);
        let g = gnp(&mut rng, n, p);
        if g.edge_count() == 0 {
            continue;
        }
        let edges: Vec<Edge> = g.edges().collect();
        let e = edges[rng.random_range(0..edges.len())];
        let mut found = false;
        for (v, w) in [
            (e.smaller(), e.larger()),
            (e.larger(), e.smaller()),
        ] {
            for &x in g.neighbors(v) {
                if x == w || g.has_edge(Edge::new(x, w)) {
                    continue;
                }
                let target = Edge::new(x, w);
                let mut without = g.clone();
                without.remove_edge(e).unwrap();
                for kind in ALL_LOCAL_INDICES {
                    let before = local_score(&without, target, kind).unwrap();
                    let after = local_score(&g, target, kind).unwrap();
                    assert!(
                        before <= after + EPS,
                        "{kind}: removing {e} raised s{target} from {after} to {before}"
                    );
                }
                found = true;
                break;
            }
            if found {
                break;
            }
        }
        if found {
            done += 1;
        }
    }
    pass("2 removal-monotonicity");
}

#[test]
fn factor_sign_suite() {
    let mut rng = substream_rng(13, 0);

    // new common neighbor: adding (v,w) with x in N(v)\N(w) raises s(x,w)
    let mut cases = 0;
    while cases < 500 {
        let n = rng.random_range(6..=14);
        let p = rng.random_range(0.2..0.45);
        let g = gnp(&mut rng, n, p);
        for _ in 0..20 {
            let v = rng.random_range(0..n);
            let w = rng.random_range(0..n);
            if v == w || g.has_edge(Edge::new(v, w)) {
                continue;
            }
            let nv = g.neighbors(v);
            if nv.is_empty() {
                continue;
            }
            let x = nv[rng.random_range(0..nv.len())];
            if x == w || g.has_edge(Edge::new(x, w)) {
                continue;
            }
            let target = Edge::new(x, w);
            let cn_before = g.common_neighbor_count(x, w);
            let mut after_g = g.clone();
            after_g.add_edge(Edge::new(v, w)).unwrap();
            for kind in ALL_LOCAL_INDICES {
                let before = local_score(&g, target, kind).unwrap();
                let after = local_score(&after_g, target, kind).unwrap();
                assert!(after + EPS >= before, "{kind}: new common neighbor lowered the score");
                if cn_before == 0 {
                    assert!(after > before, "{kind}: first common neighbor did not raise 0");
                }
            }
            cases += 1;
            break;
        }
    }

    // pure endpoint-degree rise: adding (v,w) with v outside N(x)
    cases = 0;
    while cases < 500 {
        let n = rng.random_range(6..=14);
        let p = rng.random_range(0.25..0.5);
        let g = gnp(&mut rng, n, p);
        for _ in 0..30 {
            let x = rng.random_range(0..n);
            let w = rng.random_range(0..n);
            if x == w || g.has_edge(Edge::new(x, w)) || g.common_neighbor_count(x, w) == 0 {
                continue;
            }
            let v = rng.random_range(0..n);
            if v == x || v == w || g.has_edge(Edge::new(v, w)) || g.has_edge(Edge::new(v, x)) {
                continue;
            }
            let target = Edge::new(x, w);
            let mut after_g = g.clone();
            after_g.add_edge(Edge::new(v, w)).unwrap();
            for kind in ALL_LOCAL_INDICES {
                let before = local_score(&g, target, kind).unwrap();
                let after = local_score(&after_g, target, kind).unwrap();
                if factor_profile(kind).sensitive_to_endpoint_degree {
                    assert!(after <= before + EPS, "{kind}: endpoint degree rise raised the score");
                } else {
                    assert_eq!(after, before, "{kind}: endpoint degree rise changed the score");
                }
            }
            cases += 1;
            break;
        }
    }

    // pure common-neighbor-degree rise: w is a shared neighbor of (x,y),
    // (v,w) is added with v outside N(x), N(y), {x,y}
    cases = 0;
    while cases < 500 {
        let n = rng.random_range(7..=14);
        let p = rng.random_range(0.25..0.5);
        let g = gnp(&mut rng, n, p);
        for _ in 0..30 {
            let x = rng.random_range(0..n);
            let y = rng.random_range(0..n);
            if x == y || g.has_edge(Edge::new(x, y)) {
                continue;
            }
            let shared = g.common_neighbors(x, y);
            if shared.is_empty() {
                continue;
            }
            let w = shared[rng.random_range(0..shared.len())];
            let v = rng.random_range(0..n);
            if v == x
                || v == y
                || v == w
                || g.has_edge(Edge::new(v, w))
                || g.has_edge(Edge::new(v, x))
                || g.has_edge(Edge::new(v, y))
            {
                continue;
            }
            let target = Edge::new(x, y);
            let mut after_g = g.clone();
            after_g.add_edge(Edge::new(v, w)).unwrap();
            for kind in ALL_LOCAL_INDICES {
                let before = local_score(&g, target, kind).unwrap();
                let after = local_score(&after_g, target, kind).unwrap();
                if factor_profile(kind).sensitive_to_common_neighbor_degree {
                    assert!(after < before, "{kind}: shared-neighbor degree rise did not lower the score");
                } else {
                    assert_eq!(after, before, "{kind}: shared-neighbor degree rise changed the score");
                }
            }
            cases += 1;
            break;
        }
    }
    pass("3 factor-sign-suite");
}

#[test]
fn metric_brute_force_equivalence() {
    let mut rng = substream_rng(14, 0);
    let mut done = 0;
    while done < 1000 {
        let m = rng.random_range(5..=40);
        // distinct pairs (i, m) stand in for a non-edge universe
        let items: Vec<Edge> = (0..m).map(|i| Edge::new(i, m)).collect();
        let scores: Vec<(Edge, f64)> = items
            .iter()
            .map(|&e| (e, rng.random_range(0..5) as f64 * 0.5))
            .collect();
        let probe: HashSet<Edge> = items
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.3))
            .collect();
        if probe.is_empty() || probe.len() == items.len() {
            continue;
        }
        let s = |e: Edge| scores.iter().find(|&&(x, _)| x == e).unwrap().1;
        let q: Vec<Edge> = items.iter().copied().filter(|e| probe.contains(e)).collect();
        let x: Vec<Edge> = items.iter().copied().filter(|e| !probe.contains(e)).collect();

        let mut above = 0.0;
        let mut equal = 0.0;
        for &qe in &q {
            for &xe in &x {
                if s(qe) > s(xe) {
                    above += 1.0;
                } else if s(qe) == s(xe) {
                    equal += 1.0;
                }
            }
        }
        let want_auc = (above + 0.5 * equal) / (q.len() as f64 * x.len() as f64);

        let mut want_ap = 0.0;
        for &qe in &q {
            let num = q.iter().filter(|&&e| s(e) > s(qe)).count() as f64
                + 1.0
                + 0.5 * q.iter().filter(|&&e| e != qe && s(e) == s(qe)).count() as f64;
            let den = items.iter().filter(|&&e| s(e) > s(qe)).count() as f64
                + 1.0
                + 0.5 * items.iter().filter(|&&e| e != qe && s(e) == s(qe)).count() as f64;
            want_ap += num / den;
        }
        want_ap /= q.len() as f64;

        let ranking = ScoredRanking::new(scores, probe).unwrap();
        assert!((auc(&ranking) - want_auc).abs() <= EPS);
        assert!((average_precision(&ranking) - want_ap).abs() <= EPS);
        done += 1;
    }
    pass("4 metric-brute-force-equivalence");
}

#[test]
fn naive_fast_heuristic_equivalence() {
    let mut rng = substream_rng(15, 0);
    let mut done = 0;
    while done < 500 {
        let n = rng.random_range(10..=60);
        let p = rng.random_range(0.05..0.2);
        let g = gnp(&mut rng, n, p);
        let hidden = sample_nonedges(&g, rng.random_range(1..=8), &mut rng);
        if hidden.is_empty() || g.non_edge_count() <= hidden.len() {
            continue;
        }
        let budget = rng.random_range(1..=12);
        let (addable, removable) = if rng.random_bool(0.5) {
            let add_pool: Vec<Edge> = g.non_edges().filter(|e| !hidden.contains(e)).collect();
            let rem_pool: Vec<Edge> = g.edges().collect();
            let adds: BTreeSet<Edge> = add_pool
                .choose_multiple(&mut rng, add_pool.len().min(20))
                .copied()
                .collect();
            let rems: BTreeSet<Edge> = rem_pool
                .choose_multiple(&mut rng, rem_pool.len().min(20))
                .copied()
                .collect();
            (CandidateSet::Explicit(adds), CandidateSet::Explicit(rems))
        } else {
            (CandidateSet::All, CandidateSet::All)
        };
        let kind = ALL_LOCAL_INDICES[done % 9];
        let inst = EvasionInstance::new(
            g,
            Scorer::Local(kind),
            Metric::Auc,
            hidden,
            budget,
            addable,
            removable,
        )
        .unwrap();
        let (ctr_plan, ctr_traj) = run_ctr(&inst).unwrap();
        let (pq_plan, pq_traj) = run_ctr_pq(&inst).unwrap();
        assert_eq!(ctr_plan, pq_plan, "CTR plans diverge");
        assert_eq!(ctr_traj, pq_traj, "CTR trajectories diverge");
        let (otc_plan, otc_traj) = run_otc(&inst).unwrap();
        let (fast_plan, fast_traj) = run_otc_fast(&inst).unwrap();
        assert_eq!(otc_plan, fast_plan, "OTC plans diverge");
        assert_eq!(otc_traj, fast_traj, "OTC trajectories diverge");
        done += 1;
    }
    pass("5 naive-fast-equivalence");
}

/// Independent subset walk for the oracle self-check: removals before
/// additions, subsets enumerated by bitmask instead of size-major order.
fn exhaustive_min(inst: &EvasionInstance, ops: &[PlanStep]) -> f64 {
    let mut best = evaluate_plan(inst, &ModificationPlan::default()).unwrap();
    for mask in 1u32..(1u32 << ops.len()) {
        if mask.count_ones() as usize > inst.budget {
            continue;
        }
        let steps: Vec<PlanStep> = (0..ops.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| ops[i])
            .collect();
        let v = evaluate_plan(inst, &ModificationPlan { steps }).unwrap();
        if v < best {
            best = v;
        }
    }
    best
}

#[test]
fn oracle_dominance() {
    let mut rng = substream_rng(16, 0);
    let mut done = 0;
    while done < 200 {
        let n = rng.random_range(6..=10);
        let p = rng.random_range(0.3..0.6);
        let g = gnp(&mut rng, n, p);
        let hidden = sample_nonedges(&g, rng.random_range(1..=2), &mut rng);
        // keep at least one unhidden non-edge even after 3 additions, so
        // every explored graph still has a rankable rest set
        if hidden.is_empty() || g.non_edge_count() <= hidden.len() + 4 || g.edge_count() == 0 {
            continue;
        }
        let add_pool: Vec<Edge> = g.non_edges().filter(|e| !hidden.contains(e)).collect();
        let rem_pool: Vec<Edge> = g.edges().collect();
        let na = rng.random_range(0..=add_pool.len().min(8));
        let nr = rng.random_range(0..=rem_pool.len().min(14 - na));
        let adds: BTreeSet<Edge> = add_pool.choose_multiple(&mut rng, na).copied().collect();
        let rems: BTreeSet<Edge> = rem_pool.choose_multiple(&mut rng, nr).copied().collect();
        let metric = if done % 2 == 0 { Metric::Auc } else { Metric::Ap };
        let inst = EvasionInstance::new(
            g,
            Scorer::Local(ALL_LOCAL_INDICES[done % 9]),
            metric,
            hidden,
            rng.random_range(1..=3),
            CandidateSet::Explicit(adds.clone()),
            CandidateSet::Explicit(rems.clone()),
        )
        .unwrap();
        let (_, best) = brute_force_optimum(&inst).unwrap();
        let noop = evaluate_plan(&inst, &ModificationPlan::default()).unwrap();
        assert!(best <= noop + EPS, "oracle above the no-op value");
        for plan in [
            plan_ctr_pq(&inst).unwrap(),
            plan_otc_fast(&inst).unwrap(),
            plan_alternating(&inst).unwrap(),
        ] {
            let v = evaluate_plan(&inst, &plan).unwrap();
            assert!(best <= v + EPS, "oracle above a heuristic value");
        }
        let ops: Vec<PlanStep> = rems
            .iter()
            .map(|&e| PlanStep::Remove(e))
            .chain(adds.iter().map(|&e| PlanStep::Add(e)))
            .collect();
        let recheck = exhaustive_min(&inst, &ops);
        assert!(
            (best - recheck).abs() <= EPS,
            "second enumeration order found a different optimum"
        );
        done += 1;
    }
    pass("6 oracle-dominance");
}

#[test]
fn gadget_ranking_claims() {
    let cover = vec![vec![1, 2, 3], vec![3, 4, 5]];
    for kind in ALL_LOCAL_INDICES {
        let spec = GadgetSpec {
            c: proof_constant(kind),
            universe_size: 5,
            cover: cover.clone(),
        };
        let (g, labels) = build_gamma(&spec).unwrap();
        for nodes in &labels.a {
            for &a in nodes {
                assert_eq!(g.degree(a), 3, "attachment node degree");
            }
        }
        for nodes in &labels.d {
            for &d in nodes {
                assert_eq!(g.degree(d), 2, "padding node degree");
            }
        }
        for &p in &labels.p {
            assert!((4..=5).contains(&g.degree(p)), "cover node degree");
        }
        for added in [vec![], vec![1], vec![2], vec![1, 2]] {
            let report = verify_lemma1(&spec, kind, &added).unwrap();
            assert!(
                report.passed(),
                "{kind} with A={added:?}: {:?}",
                report.counterexamples
            );
        }
    }
    pass("7 gadget-ranking-claims");
}

fn desk_scale_config(heuristic: HeuristicKind) -> ExperimentConfig {
    ExperimentConfig {
        network: "sf:100,3".parse().unwrap(),
        indices: ALL_LOCAL_INDICES.iter().map(|&k| Scorer::Local(k)).collect(),
        heuristic,
        hidden_strategy: HiddenStrategy::RemoveRandomEdges,
        hidden_size: CountRule::Paper,
        budget: CountRule::Paper,
        reps: 50,
        seed: 8,
        out: None,
    }
}

#[test]
fn desk_scale_attack_effectiveness() {
    // CTR drives AUC down for every index, with the 95% CI clear of zero
    let ctr = run_trajectory_experiment(&desk_scale_config(HeuristicKind::Ctr)).unwrap();
    for (i, kind) in ALL_LOCAL_INDICES.iter().enumerate() {
        let deltas: Vec<f64> = ctr
            .per_rep
            .iter()
            .map(|r| {
                let t = &r.trajectories[i];
                t.last().unwrap().auc - t[0].auc
            })
            .collect();
        let (mean, ci) = mean_ci(&deltas);
        assert!(
            mean < 0.0 && mean + ci < 0.0,
            "{kind}: CTR AUC delta {mean} +- {ci} does not exclude zero"
        );
    }

    // OTC drives AP down with CI clear of zero for at least 7 of 9 indices
    let otc = run_trajectory_experiment(&desk_scale_config(HeuristicKind::Otc)).unwrap();
    let mut clear = 0;
    for i in 0..ALL_LOCAL_INDICES.len() {
        let deltas: Vec<f64> = otc
            .per_rep
            .iter()
            .map(|r| {
                let t = &r.trajectories[i];
                t.last().unwrap().ap - t[0].ap
            })
            .collect();
        let (mean, ci) = mean_ci(&deltas);
        if mean < 0.0 && mean + ci < 0.0 {
            clear += 1;
        }
    }
    assert!(clear >= 7, "OTC AP delta clear of zero for only {clear}/9 indices");
    pass("8 desk-scale-attack-effectiveness");
}

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let mx = rx.iter().sum::<f64>() / rx.len() as f64;
    let my = ry.iter().sum::<f64>() / ry.len() as f64;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn tolerance_trends() {
    let ns = vec![200, 400, 600, 800, 1000];
    let ds = vec![2, 4, 6, 8, 10];
    let cfg = SweepConfig {
        model: SweepModel::ScaleFree,
        ns: ns.clone(),
        ds: ds.clone(),
        indices: vec![Scorer::Local(LocalIndexKind::CommonNeighbors)],
        heuristic: HeuristicKind::Ctr,
        hidden_strategy: HiddenStrategy::RemoveRandomEdges,
        hidden_size: CountRule::Explicit(100),
        budget: CountRule::Explicit(400),
        reps: 10,
        seed: 9,
        out: None,
    };
    let sweep = run_tolerance_sweep(&cfg).unwrap();

    let magnitude = |by_n: bool, key: usize| -> f64 {
        let group: Vec<f64> = sweep
            .cells
            .iter()
            .filter(|c| (if by_n { c.n } else { c.d }) == key)
            .map(|c| c.auc_rel_mean.abs())
            .collect();
        group.iter().sum::<f64>() / group.len() as f64
    };
    let n_keys: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let n_mags: Vec<f64> = ns.iter().map(|&n| magnitude(true, n)).collect();
    let d_keys: Vec<f64> = ds.iter().map(|&d| d as f64).collect();
    let d_mags: Vec<f64> = ds.iter().map(|&d| magnitude(false, d)).collect();
    let rho_n = spearman(&n_keys, &n_mags);
    let rho_d = spearman(&d_keys, &d_mags);
    assert!(rho_n < 0.0, "attack magnitude vs n: Spearman {rho_n} not negative");
    assert!(rho_d > 0.0, "attack magnitude vs d: Spearman {rho_d} not positive");
    pass("9 tolerance-trends");
}

#[test]
fn runtime_bounds() {
    let start = Instant::now();
    let ctr = run_runtime_benchmark(&BenchConfig {
        model: SweepModel::ScaleFree,
        ns: vec![100_000],
        d: 3,
        heuristics: vec![HeuristicKind::Ctr],
        hidden_size: 100,
        budget: 400,
        reps: 1,
        seed: 10,
        out: None,
    })
    .unwrap();
    let ctr_total = start.elapsed().as_secs_f64();
    assert!(
        ctr_total < 60.0,
        "CTR at n=100000 took {ctr_total}s end to end"
    );
    assert_eq!(ctr.rows.len(), 1);

    let start = Instant::now();
    let otc = run_runtime_benchmark(&BenchConfig {
        model: SweepModel::ScaleFree,
        ns: vec![2000, 5000, 10_000],
        d: 3,
        heuristics: vec![HeuristicKind::Otc],
        hidden_size: 100,
        budget: 400,
        reps: 1,
        seed: 10,
        out: None,
    })
    .unwrap();
    let otc_total = start.elapsed().as_secs_f64();
    assert!(otc_total < 900.0, "OTC grid took {otc_total}s end to end");
    let secs: Vec<f64> = otc.rows.iter().map(|r| r.seconds_mean).collect();
    assert!(
        secs.windows(2).all(|w| w[0] < w[1]),
        "OTC runtime not monotone over n: {secs:?}"
    );
    pass("10 runtime-bounds");
}

#[test]
fn deterministic_output() {
    let cfg = desk_scale_config(HeuristicKind::Ctr);
    let first = run_trajectory_experiment(&cfg).unwrap();
    let second = run_trajectory_experiment(&cfg).unwrap();
    assert_eq!(first.csv, second.csv, "same seed produced different CSV bytes");
    pass("11 deterministic-output");
}
