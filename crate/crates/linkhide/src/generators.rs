//! Random-network models: Barabási-Albert scale-free, Watts-Strogatz small
//! world, and Erdős-Rényi random graphs.
//!
//! All generation is driven by a ChaCha8 RNG keyed by a master seed with a
//! per-repetition stream counter, so any (model, seed, stream) triple yields
//! a bit-identical edge set on every platform.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum GeneratorError {
    #[error("cannot parse model spec '{0}'; expected sf:n,d or sw:n,d,p or er:n,d")]
    BadSpec(String),
    #[error("invalid parameters for {model}: {reason}")]
    BadParams { model: String, reason: String },
}

/// A network model with its parameters. CLI form: `sf:n,d`, `sw:n,d,p`,
/// `er:n,d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorModel {
    /// Barabási-Albert: start from a `d`-clique, then attach each new node
    /// to `d` distinct existing nodes chosen degree-proportionally.
    ScaleFree { n: usize, d: usize },
    /// Watts-Strogatz: ring lattice of even degree `d`, each edge rewired
    /// independently with probability `p`.
    SmallWorld { n: usize, d: usize, p: f64 },
    /// Erdős-Rényi: every pair included independently with probability
    /// `d/(n-1)`, giving expected average degree `d`.
    RandomGraph { n: usize, d: f64 },
}

impl GeneratorModel {
    pub fn node_count(&self) -> usize {
        match *self {
            GeneratorModel::ScaleFree { n, .. }
            | GeneratorModel::SmallWorld { n, .. }
            | GeneratorModel::RandomGraph { n, .. } => n,
        }
    }

    fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |model: &str, reason: String| {
            Err(GeneratorError::BadParams {
                model: model.to_string(),
                reason,
            })
        };
        match *self {
            GeneratorModel::ScaleFree { n, d } => {
                if d == 0 {
                    return bad("sf", "d must be positive".into());
                }
                if n < 3.max(d + 1) {
                    return bad("sf", format!("n={n} below max(3, d+1)"));
                }
            }
            GeneratorModel::SmallWorld { n, d, p } => {
                if d == 0 || d % 2 != 0 {
                    return bad("sw", format!("d={d} must be positive and even"));
                }
                if n < 3.max(d + 1) {
                    return bad("sw", format!("n={n} below max(3, d+1)"));
                }
                if !(0.0..=1.0).contains(&p) {
                    return bad("sw", format!("p={p} outside [0,1]"));
                }
            }
            GeneratorModel::RandomGraph { n, d } => {
                if n < 3 {
                    return bad("er", format!("n={n} below 3"));
                }
                if !(d > 0.0 && d < n as f64) {
                    return bad("er", format!("d={d} outside (0, n)"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorModel::ScaleFree { n, d } => write!(f, "sf:{n},{d}"),
            GeneratorModel::SmallWorld { n, d, p } => write!(f, "sw:{n},{d},{p}"),
            GeneratorModel::RandomGraph { n, d } => write!(f, "er:{n},{d}"),
        }
    }
}

impl FromStr for GeneratorModel {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeneratorError::BadSpec(s.to_string());
        let (model, args) = s.split_once(':').ok_or_else(bad)?;
        let parts: Vec<&str> = args.split(',').collect();
        let parsed = match (model, parts.as_slice()) {
            ("sf", [n, d]) => GeneratorModel::ScaleFree {
                n: n.trim().parse().map_err(|_| bad())?,
                d: d.trim().parse().map_err(|_| bad())?,
            },
            ("sw", [n, d, p]) => GeneratorModel::SmallWorld {
                n: n.trim().parse().map_err(|_| bad())?,
                d: d.trim().parse().map_err(|_| bad())?,
                p: p.trim().parse().map_err(|_| bad())?,
            },
            ("er", [n, d]) => GeneratorModel::RandomGraph {
                n: n.trim().parse().map_err(|_| bad())?,
                d: d.trim().parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        parsed.validate()?;
        Ok(parsed)
    }
}

/// A model plus the master seed that drives it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub model: GeneratorModel,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph, GeneratorError> {
        generate_stream(self.model, self.seed, 0)
    }
}

/// RNG substream `stream` of master seed `seed`; repetitions of one
/// experiment use consecutive streams.
pub fn substream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generate a network deterministically from `(model, seed, stream)`.
pub fn generate_stream(
    model: GeneratorModel,
    seed: u64,
    stream: u64,
) -> Result<Graph, GeneratorError> {
    model.validate()?;
    let mut rng = substream_rng(seed, stream);
    Ok(match model {
        GeneratorModel::ScaleFree { n, d } => scale_free(n, d, &mut rng),
        GeneratorModel::SmallWorld { n, d, p } => small_world(n, d, p, &mut rng),
        GeneratorModel::RandomGraph { n, d } => random_graph(n, d, &mut rng),
    })
}

fn scale_free(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    // degree-proportional sampling via the repeated-endpoint list
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * (d * n));
    for i in 0..d {
        for j in i + 1..d {
            g.add_edge(Edge::new(i, j)).unwrap();
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    for v in d..n {
        let mut targets: Vec<NodeId> = Vec::with_capacity(d);
        while targets.len() < d {
            let t = if endpoints.is_empty() {
                // only reachable with d=1 and a single seed node
                rng.random_range(0..v)
            } else {
                endpoints[rng.random_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            g.add_edge(Edge::new(v, t)).unwrap();
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    g
}

fn small_world(n: usize, d: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in 1..=d / 2 {
            let e = Edge::new(i, (i + j) % n);
            // with d close to n the two ring offsets can coincide
            if !g.has_edge(e) {
                g.add_edge(e).unwrap();
            }
        }
    }
    if p == 0.0 {
        return g;
    }
    for i in 0..n {
        for j in 1..=d / 2 {
            let old = Edge::new(i, (i + j) % n);
            if !g.has_edge(old) || !rng.random_bool(p) {
                continue;
            }
            if g.degree(i) == n - 1 {
                continue; // i is saturated; nothing to rewire to
            }
            let new = loop {
                let t = rng.random_range(0..n);
                if t != i && !g.has_edge(Edge::new(i, t)) {
                    break Edge::new(i, t);
                }
            };
            g.remove_edge(old).unwrap();
            g.add_edge(new).unwrap();
        }
    }
    g
}

fn random_graph(n: usize, d: f64, rng: &mut ChaCha8Rng) -> Graph {
    let p = d / (n - 1) as f64;
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                g.add_edge(Edge::new(i, j)).unwrap();
            }
        }
    }
    g
}
