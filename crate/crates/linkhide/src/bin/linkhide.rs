//! Command-line experiment runner.
//!
//! Subcommands mirror the harness protocols (`trajectory`, `sweep`,
//! `single-link`, `bench`) plus two inspection tools (`score`, `oracle`).
//! Flags may also be supplied through a key=value config file via
//! `--config`; explicit flags override file entries.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use linkhide::evasion::{
    brute_force_optimum, CandidateSet, EvasionInstance, Metric, Scorer,
};
use linkhide::generators::substream_rng;
use linkhide::harness::{
    parse_config_file, run_runtime_benchmark, run_single_link_scenario, run_tolerance_sweep,
    run_trajectory_experiment, BenchConfig, CountRule, ExperimentConfig, HeuristicKind,
    NetworkSource, SingleLinkConfig, SweepConfig,
};
use linkhide::local::ALL_LOCAL_INDICES;

#[derive(Parser)]
#[command(
    name = "linkhide",
    about = "Link-prediction evasion experiments: similarity indices, ranking metrics, and the CTR/OTC hiding heuristics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-iteration attack trajectories, aggregated across repetitions
    Trajectory(CommonArgs),
    /// Attack-tolerance sweep over (n, d) grids with marginal sections
    Sweep(SweepArgs),
    /// Hide single top-ranked pairs with an evader-restricted action space
    SingleLink(SingleLinkArgs),
    /// Wall-clock runtime of the heuristics over a size grid
    Bench(BenchArgs),
    /// Dump every non-edge score for one index
    Score(ScoreArgs),
    /// Brute-force optimum plan for a small instance
    Oracle(OracleArgs),
}

/// Flags shared by the experiment subcommands. Every flag is optional here;
/// defaults are applied after merging with `--config`.
#[derive(Args, Clone)]
struct CommonArgs {
    /// Network: an edge-list path or a model spec (sf:n,d | sw:n,d,p | er:n,d)
    #[arg(long)]
    network: Option<String>,
    /// Comma-separated index list (cn,salton,...,katz,...); default: all nine local
    #[arg(long)]
    index: Option<String>,
    /// ctr | otc | alt
    #[arg(long)]
    heuristic: Option<String>,
    /// remove-random-edges | random-nonedges | top-ranked-nonedges:k
    #[arg(long)]
    hidden: Option<String>,
    /// Hidden-set size: an integer or "paper" (max(10, |E|/100))
    #[arg(long)]
    hidden_size: Option<String>,
    /// Budget: an integer or "paper" (4|H|)
    #[arg(long)]
    budget: Option<String>,
    /// Repetitions
    #[arg(long)]
    reps: Option<String>,
    /// Master seed
    #[arg(long)]
    seed: Option<String>,
    /// CSV output path (stdout if omitted)
    #[arg(long)]
    out: Option<String>,
    /// key=value config file; explicit flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Model family: sf | sw:p | er
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated node counts
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated average degrees
    #[arg(long)]
    d: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SingleLinkArgs {
    /// How many top-ranked non-edges to attack
    #[arg(long)]
    top_k: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Model family: sf | sw:p | er
    #[arg(long)]
    model: Option<String>,
    /// Comma-separated node counts
    #[arg(long)]
    n: Option<String>,
    /// Average degree
    #[arg(long)]
    d: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Metric to minimize: auc | ap
    #[arg(long)]
    metric: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Flag values merged with the config file: explicit flags win, then file
/// entries, then the built-in default.
struct Resolved {
    file: HashMap<String, String>,
}

impl Resolved {
    fn load(config: &Option<PathBuf>) -> Result<Self, String> {
        let mut file = HashMap::new();
        if let Some(path) = config {
            for (k, v) in parse_config_file(path).map_err(|e| e.to_string())? {
                file.insert(k, v);
            }
        }
        Ok(Resolved { file })
    }

    fn raw(&self, cli: &Option<String>, key: &str, default: Option<&str>) -> Result<String, String> {
        if let Some(v) = cli {
            return Ok(v.clone());
        }
        if let Some(v) = self.file.get(key) {
            return Ok(v.clone());
        }
        default
            .map(str::to_string)
            .ok_or_else(|| format!("missing required setting '{key}' (flag --{key} or config entry)"))
    }

    fn get<T: FromStr>(
        &self,
        cli: &Option<String>,
        key: &str,
        default: Option<&str>,
    ) -> Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(cli, key, default)?;
        raw.parse()
            .map_err(|e| format!("invalid value '{raw}' for '{key}': {e}"))
    }

    fn optional<T: FromStr>(&self, cli: &Option<String>, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(cli, key, Some("")) {
            Ok(s) if s.is_empty() => Ok(None),
            Ok(s) => s
                .parse()
                .map(Some)
                .map_err(|e| format!("invalid value '{s}' for '{key}': {e}")),
            Err(e) => Err(e),
        }
    }
}

fn parse_indices(raw: &str) -> Result<Vec<Scorer>, String> {
    raw.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Scorer>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_usize_list(raw: &str) -> Result<Vec<usize>, String> {
    raw.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| format!("invalid integer '{t}': {e}")))
        .collect()
}

fn default_indices() -> String {
    ALL_LOCAL_INDICES
        .iter()
        .map(|k| k.name())
        .collect::<Vec<_>>()
        .join(",")
}

fn common_config(args: &CommonArgs) -> Result<ExperimentConfig, String> {
    let r = Resolved::load(&args.config)?;
    Ok(ExperimentConfig {
        network: r.get(&args.network, "network", None)?,
        indices: parse_indices(&r.raw(&args.index, "index", Some(&default_indices()))?)?,
        heuristic: r.get(&args.heuristic, "heuristic", Some("ctr"))?,
        hidden_strategy: r.get(&args.hidden, "hidden", Some("remove-random-edges"))?,
        hidden_size: r.get(&args.hidden_size, "hidden-size", Some("paper"))?,
        budget: r.get(&args.budget, "budget", Some("paper"))?,
        reps: r.get(&args.reps, "reps", Some("50"))?,
        seed: r.get(&args.seed, "seed", Some("0"))?,
        out: r.optional(&args.out, "out")?,
    })
}

fn emit(csv: &str, out: &Option<PathBuf>) {
    // harness functions write the file themselves; print when unset
    if out.is_none() {
        print!("{csv}");
    }
}

fn run() -> Result<(), String> {
    match Cli::parse().cmd {
        Cmd::Trajectory(args) => {
            let cfg = common_config(&args)?;
            let result = run_trajectory_experiment(&cfg).map_err(|e| e.to_string())?;
            emit(&result.csv, &cfg.out);
        }
        Cmd::Sweep(args) => {
            let r = Resolved::load(&args.common.config)?;
            let base = common_config(&args.common)?;
            let cfg = SweepConfig {
                model: r.get(&args.model, "model", Some("sf"))?,
                ns: parse_usize_list(&r.raw(&args.n, "n", Some("200,400,600,800,1000"))?)?,
                ds: parse_usize_list(&r.raw(&args.d, "d", Some("2,4,6,8,10"))?)?,
                indices: base.indices,
                heuristic: base.heuristic,
                hidden_strategy: base.hidden_strategy,
                hidden_size: base.hidden_size,
                budget: base.budget,
                reps: base.reps,
                seed: base.seed,
                out: base.out.clone(),
            };
            let result = run_tolerance_sweep(&cfg).map_err(|e| e.to_string())?;
            emit(&result.csv, &cfg.out);
        }
        Cmd::SingleLink(args) => {
            let r = Resolved::load(&args.common.config)?;
            let base = common_config(&args.common)?;
            let budget = match base.budget {
                CountRule::Explicit(b) => b,
                CountRule::Paper => 10,
            };
            let cfg = SingleLinkConfig {
                network: base.network,
                indices: base.indices,
                heuristic: base.heuristic,
                top_k: r.get(&args.top_k, "top-k", Some("1000"))?,
                budget,
                reps: base.reps,
                seed: base.seed,
                out: base.out.clone(),
            };
            let result = run_single_link_scenario(&cfg).map_err(|e| e.to_string())?;
            if !result.evader_incidence_ok {
                return Err("internal error: a plan step did not touch its evader".into());
            }
            emit(&result.csv, &cfg.out);
        }
        Cmd::Bench(args) => {
            let r = Resolved::load(&args.common.config)?;
            let base = common_config(&args.common)?;
            let hidden_size = match base.hidden_size {
                CountRule::Explicit(k) => k,
                CountRule::Paper => 100,
            };
            let budget = match base.budget {
                CountRule::Explicit(b) => b,
                CountRule::Paper => 4 * hidden_size,
            };
            let heuristics = match base.heuristic {
                HeuristicKind::Alt => vec![HeuristicKind::Alt],
                _ => vec![HeuristicKind::Ctr, HeuristicKind::Otc],
            };
            let cfg = BenchConfig {
                model: r.get(&args.model, "model", Some("sf"))?,
                ns: parse_usize_list(&r.raw(&args.n, "n", Some("1000,10000,100000"))?)?,
                d: r.get(&args.d, "d", Some("3"))?,
                heuristics,
                hidden_size,
                budget,
                reps: base.reps,
                seed: base.seed,
                out: base.out.clone(),
            };
            let result = run_runtime_benchmark(&cfg).map_err(|e| e.to_string())?;
            emit(&result.csv, &cfg.out);
        }
        Cmd::Score(args) => {
            let cfg = common_config(&args.common)?;
            let index = cfg.indices[0];
            let g = realize_network(&cfg)?;
            let scores = linkhide::evasion::score_nonedges(&g, index).map_err(|e| e.to_string())?;
            let mut csv = String::from("a,b,score\n");
            for (e, s) in scores {
                csv.push_str(&format!("{},{},{}\n", e.smaller(), e.larger(), s));
            }
            if let Some(path) = &cfg.out {
                std::fs::write(path, &csv).map_err(|e| e.to_string())?;
            } else {
                print!("{csv}");
            }
        }
        Cmd::Oracle(args) => {
            let r = Resolved::load(&args.common.config)?;
            let cfg = common_config(&args.common)?;
            let metric = match r.raw(&args.metric, "metric", Some("auc"))?.as_str() {
                "auc" => Metric::Auc,
                "ap" => Metric::Ap,
                other => return Err(format!("invalid metric '{other}'; expected auc or ap")),
            };
            let mut g = realize_network(&cfg)?;
            let mut rng = substream_rng(cfg.seed, 1);
            let size = cfg.hidden_size.hidden_size(g.edge_count());
            let hidden = linkhide::harness::select_hidden(
                &mut g,
                cfg.hidden_strategy,
                size,
                cfg.indices[0],
                &mut rng,
            )
            .map_err(|e| e.to_string())?;
            let budget = match cfg.budget {
                CountRule::Explicit(b) => b,
                CountRule::Paper => 4 * hidden.len(),
            };
            let inst = EvasionInstance::new(
                g,
                cfg.indices[0],
                metric,
                hidden,
                budget,
                CandidateSet::All,
                CandidateSet::All,
            )
            .map_err(|e| e.to_string())?;
            let (plan, value) = brute_force_optimum(&inst).map_err(|e| e.to_string())?;
            let log = plan.to_log();
            if let Some(path) = &cfg.out {
                std::fs::write(path, &log).map_err(|e| e.to_string())?;
            }
            print!("{log}");
            println!("value,{value}");
        }
    }
    Ok(())
}

fn realize_network(cfg: &ExperimentConfig) -> Result<linkhide::Graph, String> {
    match &cfg.network {
        NetworkSource::Model(m) => {
            linkhide::generators::generate_stream(*m, cfg.seed, 0).map_err(|e| e.to_string())
        }
        NetworkSource::File(p) => linkhide::graph::load_edge_list(p)
            .map(|l| l.graph)
            .map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
