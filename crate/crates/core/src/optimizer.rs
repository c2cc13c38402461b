//! Stochastic greedy search for connected graphs of extremal `C̄`
//! (seed vertex 0), and an exhaustive oracle for small dimensions.
//!
//! A local move picks a pivot vertex and a set of candidate vertices and
//! tries every on/off assignment of the pivot-candidate edges, keeping the
//! connected assignment with the best `C̄`. Ties (values within
//! [`TIE_TOLERANCE`] of the best) go to the smallest assignment bitmask, so
//! results do not depend on evaluation order.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{is_connected, Graph};
use crate::krylov::{CbarEvaluator, WeightSequence};

/// Values closer than this are considered tied.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Largest number of candidates a single move may enumerate.
pub const MAX_CANDIDATES: usize = 20;

/// Largest dimension accepted by [`brute_force`].
pub const MAX_BRUTE_FORCE_DIM: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// `a` beats `b` by more than `tol`.
    pub fn improves(self, a: f64, b: f64, tol: f64) -> bool {
        match self {
            Self::Minimize => a < b - tol,
            Self::Maximize => a > b + tol,
        }
    }

    fn extreme(self, values: impl Iterator<Item = f64>) -> Option<f64> {
        values.reduce(|x, y| match self {
            Self::Minimize => x.min(y),
            Self::Maximize => x.max(y),
        })
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Minimize => "min",
            Self::Maximize => "max",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Self::Minimize),
            "max" | "maximize" => Ok(Self::Maximize),
            other => Err(Error::InvalidArgument(format!("unknown direction `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub dim: usize,
    pub direction: Direction,
    /// Candidates per local move, `1..=20`.
    pub candidate_count: usize,
    /// A restart ends after this many consecutive rounds without improvement.
    pub max_stale_rounds: usize,
    pub restarts: usize,
    pub rng_seed: u64,
    pub weights: WeightSequence,
}

impl OptimizerConfig {
    pub fn new(dim: usize, direction: Direction) -> Self {
        Self {
            dim,
            direction,
            candidate_count: MAX_CANDIDATES,
            max_stale_rounds: 200,
            restarts: 8,
            rng_seed: 0,
            weights: WeightSequence::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidDimension { min: 2, got: self.dim });
        }
        if !(1..=MAX_CANDIDATES).contains(&self.candidate_count) {
            return Err(Error::InvalidArgument(format!(
                "candidate_count must be in 1..={MAX_CANDIDATES}, got {}",
                self.candidate_count
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("at least one restart is required".into()));
        }
        self.weights.values(self.dim)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub restart: usize,
    pub round: usize,
    pub cbar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerResult {
    pub best_graph: Graph,
    pub best_cbar: f64,
    /// Starting cost and every improvement, per restart.
    pub cost_trace: Vec<TracePoint>,
    pub best_restart: usize,
    /// Total number of candidate graphs whose `C̄` was computed.
    pub evaluations: u64,
}

/// Index of the first value tied with the extreme one.
fn select(values: &[Option<f64>], direction: Direction) -> Option<usize> {
    let best = direction.extreme(values.iter().flatten().copied())?;
    values
        .iter()
        .position(|v| matches!(v, Some(v) if (v - best).abs() <= TIE_TOLERANCE))
}

/// Reusable state for evaluating local moves.
#[derive(Debug, Clone)]
pub struct LocalSearch {
    evaluator: CbarEvaluator,
    scores: Vec<Option<f64>>,
    evaluations: u64,
}

impl LocalSearch {
    pub fn new(weights: WeightSequence) -> Self {
        Self {
            evaluator: CbarEvaluator::new(weights),
            scores: Vec::new(),
            evaluations: 0,
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn cbar(&mut self, g: &Graph) -> Result<f64> {
        self.evaluations += 1;
        self.evaluator.evaluate(g, 0)
    }

    /// Best connected re-wiring of the edges between `pivot` and
    /// `candidates`, with its `C̄`. Returns `None` if no assignment is
    /// connected.
    pub fn best_move(
        &mut self,
        g: &Graph,
        pivot: usize,
        candidates: &[usize],
        direction: Direction,
    ) -> Result<Option<(Graph, f64)>> {
        let mut cands = candidates.to_vec();
        cands.sort_unstable();
        check_move(g, pivot, &cands)?;

        let k = cands.len();
        let mut work = g.clone();
        for &c in &cands {
            work.set_edge(pivot, c, false);
        }
        self.scores.clear();
        self.scores.resize(1 << k, None);

        // Gray-code walk: one edge toggles per step.
        let mut mask = 0usize;
        for step in 0..1usize << k {
            if step > 0 {
                let bit = step.trailing_zeros() as usize;
                mask ^= 1 << bit;
                work.set_edge(pivot, cands[bit], mask >> bit & 1 == 1);
            }
            if is_connected(&work) {
                self.evaluations += 1;
                self.scores[mask] = Some(self.evaluator.evaluate(&work, 0)?);
            }
        }

        let Some(chosen) = select(&self.scores, direction) else {
            return Ok(None);
        };
        for (bit, &c) in cands.iter().enumerate() {
            work.set_edge(pivot, c, chosen >> bit & 1 == 1);
        }
        Ok(Some((work, self.scores[chosen].expect("selected score"))))
    }
}

fn check_move(g: &Graph, pivot: usize, sorted: &[usize]) -> Result<()> {
    let d = g.dim();
    if pivot >= d {
        return Err(Error::VertexOutOfRange { vertex: pivot, dim: d });
    }
    if sorted.len() > MAX_CANDIDATES {
        return Err(Error::InvalidArgument(format!(
            "{} candidates exceed the limit of {MAX_CANDIDATES}",
            sorted.len()
        )));
    }
    if let Some(&c) = sorted.iter().find(|&&c| c >= d) {
        return Err(Error::VertexOutOfRange { vertex: c, dim: d });
    }
    if sorted.contains(&pivot) {
        return Err(Error::InvalidArgument(format!("pivot {pivot} listed as a candidate")));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("candidates must be distinct".into()));
    }
    Ok(())
}

/// One greedy move; returns `g` unchanged when no assignment is connected.
pub fn local_move(
    g: &Graph,
    pivot: usize,
    candidates: &[usize],
    direction: Direction,
    w: &WeightSequence,
) -> Result<Graph> {
    let mut search = LocalSearch::new(w.clone());
    Ok(search
        .best_move(g, pivot, candidates, direction)?
        .map_or_else(|| g.clone(), |(h, _)| h))
}

/// Uniformly random symmetric 0/1 adjacency, resampled until connected.
fn random_connected_graph<R: Rng>(dim: usize, rng: &mut R) -> Graph {
    loop {
        let mut g = Graph::empty(dim).expect("dim >= 2");
        for i in 0..dim {
            for j in i + 1..dim {
                if rng.gen::<bool>() {
                    g.set_edge(i, j, true);
                }
            }
        }
        if is_connected(&g) {
            return g;
        }
    }
}

/// RNG for one restart: the root seed selects the key, the restart index
/// the stream.
fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

struct RestartOutcome {
    graph: Graph,
    cbar: f64,
    trace: Vec<TracePoint>,
}

fn run_restart(cfg: &OptimizerConfig, restart: usize, search: &mut LocalSearch) -> Result<RestartOutcome> {
    let d = cfg.dim;
    let mut rng = restart_rng(cfg.rng_seed, restart);
    let mut graph = random_connected_graph(d, &mut rng);
    let mut cost = search.cbar(&graph)?;
    let mut trace = vec![TracePoint { restart, round: 0, cbar: cost }];

    let picks = cfg.candidate_count.min(d - 1);
    let mut stale = 0;
    let mut round = 0;
    while stale < cfg.max_stale_rounds {
        round += 1;
        let pivot = rng.gen_range(0..d);
        let candidates: Vec<usize> = sample(&mut rng, d - 1, picks)
            .into_iter()
            .map(|c| if c >= pivot { c + 1 } else { c })
            .collect();
        let proposal = search.best_move(&graph, pivot, &candidates, cfg.direction)?;
        let Some((next, next_cost)) = proposal else {
            stale += 1;
            continue;
        };
        let improved = cfg.direction.improves(next_cost, cost, TIE_TOLERANCE);
        if improved || !cfg.direction.improves(cost, next_cost, 0.0) {
            graph = next;
            if improved {
                trace.push(TracePoint { restart, round, cbar: next_cost });
            }
            cost = next_cost;
        }
        stale = if improved { 0 } else { stale + 1 };
    }
    Ok(RestartOutcome { graph, cbar: cost, trace })
}

/// Best graph over `cfg.restarts` independent greedy runs.
pub fn optimize(cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    cfg.validate()?;
    let mut search = LocalSearch::new(cfg.weights.clone());
    let mut best: Option<(usize, RestartOutcome)> = None;
    let mut cost_trace = Vec::new();
    for restart in 0..cfg.restarts {
        let outcome = run_restart(cfg, restart, &mut search)?;
        cost_trace.extend_from_slice(&outcome.trace);
        let better = match &best {
            None => true,
            Some((_, b)) => cfg.direction.improves(outcome.cbar, b.cbar, TIE_TOLERANCE),
        };
        if better {
            best = Some((restart, outcome));
        }
    }
    let (best_restart, outcome) = best.expect("at least one restart");
    Ok(OptimizerResult {
        best_graph: outcome.graph,
        best_cbar: outcome.cbar,
        cost_trace,
        best_restart,
        evaluations: search.evaluations(),
    })
}

/// Exact extremum over all connected labelled graphs on `dim` vertices.
///
/// Graphs are indexed by a bitmask over the edges in lexicographic order
/// (`(0,1), (0,2), ..`); ties go to the smallest mask. `dim = 7` means
/// 2^21 graphs and takes on the order of ten seconds in an optimized build.
pub fn brute_force(dim: usize, direction: Direction, w: &WeightSequence) -> Result<OptimizerResult> {
    if !(2..=MAX_BRUTE_FORCE_DIM).contains(&dim) {
        return Err(Error::Infeasible(format!(
            "brute force supports 2..={MAX_BRUTE_FORCE_DIM} vertices, got {dim}"
        )));
    }
    w.values(dim)?;
    let edges: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect();
    let mut search = LocalSearch::new(w.clone());
    let mut scores = vec![None; 1 << edges.len()];
    let mut g = Graph::empty(dim)?;
    let mut mask = 0usize;
    for step in 0..1usize << edges.len() {
        if step > 0 {
            let bit = step.trailing_zeros() as usize;
            mask ^= 1 << bit;
            let (i, j) = edges[bit];
            g.set_edge(i, j, mask >> bit & 1 == 1);
        }
        if is_connected(&g) {
            scores[mask] = Some(search.cbar(&g)?);
        }
    }
    let chosen = select(&scores, direction).expect("complete graph is connected");
    let best_graph = Graph::from_edges(
        dim,
        edges.iter().enumerate().filter(|(b, _)| chosen >> b & 1 == 1).map(|(_, &e)| e),
    )?;
    let best_cbar = scores[chosen].expect("selected score");
    Ok(OptimizerResult {
        best_graph,
        best_cbar,
        cost_trace: vec![TracePoint { restart: 0, round: 0, cbar: best_cbar }],
        best_restart: 0,
        evaluations: search.evaluations(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub dim: usize,
    pub cbar: f64,
    pub graph: Graph,
}

/// Runs [`optimize`] for every dimension in `dims`, using `template` for
/// everything but the dimension.
pub fn sweep(
    dims: impl IntoIterator<Item = usize>,
    template: &OptimizerConfig,
) -> Result<Vec<SweepRow>> {
    dims.into_iter()
        .map(|dim| {
            let cfg = OptimizerConfig { dim, ..template.clone() };
            let res = optimize(&cfg)?;
            Ok(SweepRow {
                dim,
                cbar: res.best_cbar,
                graph: res.best_graph,
            })
        })
        .collect()
}

/// `i-j;k-l;...`
pub fn edges_field(g: &Graph) -> String {
    g.edges().map(|(i, j)| format!("{i}-{j}")).collect::<Vec<_>>().join(";")
}

/// CSV with header `D,cbar,edges`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("D,cbar,edges\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.dim, r.cbar, edges_field(&r.graph)));
    }
    out
}
