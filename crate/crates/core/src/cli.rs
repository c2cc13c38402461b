//! Command-line front end. Parsing lives here (rather than in `main.rs`) so
//! that tests can drive every subcommand in-process.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analytic::{cbar_closed_form, Family};
use crate::error::Error;
use crate::graphs::{make_hub_k_regular, parse_graph, serialize_graph, Graph, GraphFormat, GluedTree};
use crate::krylov::{self, SpreadDynamics, WeightSequence};
use crate::optimizer::{self, edges_field, Direction, OptimizerConfig, OptimizerResult, SweepRow};

/// Exit status for unusable command-line flags.
pub const EXIT_USAGE: i32 = 64;
/// Exit status for parameters no graph can satisfy.
pub const EXIT_INFEASIBLE: i32 = 65;
/// Exit status for unreadable or malformed input.
pub const EXIT_INPUT: i32 = 1;
/// Exit status when the computation succeeded on a disconnected graph.
pub const EXIT_DISCONNECTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "krylov-walk", version, about = "Krylov spread complexity of quantum walks on graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Long-time average complexity and Krylov occupations of one graph.
    Compute(ComputeArgs),
    /// Write a member of a graph family.
    Generate(GenerateArgs),
    /// Greedy search for a graph of extremal complexity.
    Optimize(OptimizeArgs),
    /// Exhaustive search over all graphs on up to 7 vertices.
    BruteForce(BruteForceArgs),
    /// Run the optimizer for a range of dimensions.
    Sweep(SweepArgs),
    /// Finite-time averages approaching the long-time average.
    Convergence(ConvergenceArgs),
    /// Long-time vertex occupation probabilities.
    Limiting(LimitingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Path,
    Complete,
    Star,
    HubKRegular,
    MAryTree,
    GluedTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFileFormat {
    EdgeList,
    Json,
    Dot,
}

impl From<GraphFileFormat> for GraphFormat {
    fn from(f: GraphFileFormat) -> Self {
        match f {
            GraphFileFormat::EdgeList => GraphFormat::EdgeList,
            GraphFileFormat::Json => GraphFormat::Json,
            GraphFileFormat::Dot => GraphFormat::Dot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Min,
    Max,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Min => Direction::Minimize,
            DirectionArg::Max => Direction::Maximize,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Graph family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyName>,
    /// Vertex count (path, complete, star, hub-k-regular).
    #[arg(long)]
    pub d: Option<usize>,
    /// Degree of the regular part (hub-k-regular).
    #[arg(long)]
    pub k: Option<usize>,
    /// Arity (m-ary-tree).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of levels (m-ary-tree).
    #[arg(long)]
    pub h: Option<usize>,
    /// Order (glued-tree).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GraphSource {
    /// Graph file; `.json` is read as JSON, anything else as an edge list.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Output file (`stdout` or omitted for standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 0)]
    pub seed_vertex: usize,
    /// `linear` or a file of whitespace/comma separated weights.
    #[arg(long, default_value = "linear")]
    pub weights: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Relabelling seed for the regular part of hub-k-regular graphs.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "graph-format", value_enum, default_value_t = GraphFileFormat::EdgeList)]
    pub graph_format: GraphFileFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    /// Candidate vertices per local move (at most 20).
    #[arg(long, default_value_t = optimizer::MAX_CANDIDATES)]
    pub candidates: usize,
    /// Consecutive non-improving rounds that end a restart.
    #[arg(long, default_value_t = 200)]
    pub stale_rounds: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Root RNG seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "linear")]
    pub weights: String,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub d: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BruteForceArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    #[arg(long, default_value = "linear")]
    pub weights: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub d_min: usize,
    #[arg(long)]
    pub d_max: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 0)]
    pub seed_vertex: usize,
    /// Comma-separated horizons; overrides the log-spaced grid.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub t: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1e4)]
    pub t_max: f64,
    /// Points in the log-spaced grid.
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    #[arg(long, default_value = "linear")]
    pub weights: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LimitingArgs {
    #[command(flatten)]
    pub source: GraphSource,
    #[arg(long, default_value_t = 0)]
    pub seed_vertex: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A failed command together with its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: msg.into() }
    }

    fn input(msg: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::SelfLoop(_) | Error::DuplicateEdge(..) => EXIT_INPUT,
            Error::VertexOutOfRange { .. } | Error::InvalidArgument(_) | Error::InvalidWeights(_) => {
                EXIT_USAGE
            }
            Error::InvalidDimension { .. } | Error::Infeasible(_) | Error::NotSymmetric(_) => {
                EXIT_INFEASIBLE
            }
        };
        Self { code, message: e.to_string() }
    }
}

/// Text produced by a successful command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    /// Exit status to report (0, or [`EXIT_DISCONNECTED`]).
    pub code: i32,
    /// Destination requested with `--out`, if any.
    pub out: Option<PathBuf>,
}

impl Outcome {
    fn new(output: String, out: &Option<PathBuf>) -> Self {
        let out = out.clone().filter(|p| p.as_os_str() != "stdout");
        Self { output, code: 0, out }
    }
}

fn family_from_args(a: &FamilyArgs) -> Result<Family, CliError> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::usage(format!("--{flag} is required for this family")))
    };
    let name = a.family.ok_or_else(|| CliError::usage("--family is required"))?;
    Ok(match name {
        FamilyName::Path => Family::Path { d: need(a.d, "d")? },
        FamilyName::Complete => Family::Complete { d: need(a.d, "d")? },
        FamilyName::Star => Family::Star { d: need(a.d, "d")? },
        FamilyName::HubKRegular => Family::HubKRegular { d: need(a.d, "d")?, k: need(a.k, "k")? },
        FamilyName::MAryTree => Family::MAryTree { m: need(a.m, "m")?, h: need(a.h, "h")? },
        FamilyName::GluedTree => Family::GluedTree { n: need(a.n, "n")? },
    })
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_graph(src: &GraphSource) -> Result<Graph, CliError> {
    match &src.graph {
        Some(path) => {
            let bytes = read_file(path)?;
            let format = if path.extension().is_some_and(|e| e == "json") {
                GraphFormat::Json
            } else {
                GraphFormat::EdgeList
            };
            parse_graph(&bytes, format).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
        }
        None => Ok(family_from_args(&src.family)?.build()?),
    }
}

fn load_weights(spec: &str) -> Result<WeightSequence, CliError> {
    if spec == "linear" {
        return Ok(WeightSequence::Linear);
    }
    let text = String::from_utf8(read_file(Path::new(spec))?)
        .map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    let values = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| CliError::input(format!("{spec}: `{t}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightSequence::custom(values)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn compute(a: &ComputeArgs) -> Result<Outcome, CliError> {
    let g = load_graph(&a.source)?;
    let w = load_weights(&a.weights)?;
    let report = krylov::cbar(&g, a.seed_vertex, &w)?;
    let connected = g.is_connected();
    let output = match a.output.format {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["connected"] = json!(connected);
            if !connected {
                v["warning"] = json!("graph is disconnected; only the seed's component is explored");
            }
            to_json(&v)
        }
        OutputFormat::Csv => format!(
            "seed,d_K,cbar,degenerate,connected,kappa\n{},{},{},{},{},{}\n",
            report.seed,
            report.krylov_dim,
            report.cbar,
            report.degenerate,
            connected,
            join(&report.kappa)
        ),
    };
    let mut outcome = Outcome::new(output, &a.output.out);
    if !connected {
        outcome.code = EXIT_DISCONNECTED;
    }
    Ok(outcome)
}

fn generate(a: &GenerateArgs) -> Result<Outcome, CliError> {
    let family = family_from_args(&a.family)?;
    let g = match (family, a.seed) {
        (Family::HubKRegular { d, k }, seed) => make_hub_k_regular(d, k, seed)?,
        (other, _) => other.build()?,
    };
    let bytes = serialize_graph(&g, a.graph_format.into());
    Ok(Outcome::new(String::from_utf8(bytes).expect("ASCII output"), &a.out))
}

fn search_config(dim: usize, s: &SearchArgs) -> Result<OptimizerConfig, CliError> {
    let cfg = OptimizerConfig {
        dim,
        direction: s.direction.into(),
        candidate_count: s.candidates,
        max_stale_rounds: s.stale_rounds,
        restarts: s.restarts,
        rng_seed: s.seed,
        weights: load_weights(&s.weights)?,
    };
    cfg.validate().map_err(|e| match e {
        Error::InvalidDimension { .. } => CliError::from(e),
        other => CliError::usage(other.to_string()),
    })?;
    Ok(cfg)
}

fn result_output(res: &OptimizerResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(res),
        OutputFormat::Csv => optimizer::sweep_csv(&[SweepRow {
            dim: res.best_graph.dim(),
            cbar: res.best_cbar,
            graph: res.best_graph.clone(),
        }]),
    }
}

fn optimize(a: &OptimizeArgs) -> Result<Outcome, CliError> {
    let cfg = search_config(a.d, &a.search)?;
    let res = optimizer::optimize(&cfg)?;
    Ok(Outcome::new(result_output(&res, a.output.format), &a.output.out))
}

fn brute_force(a: &BruteForceArgs) -> Result<Outcome, CliError> {
    let w = load_weights(&a.weights)?;
    let res = optimizer::brute_force(a.d, a.direction.into(), &w)?;
    Ok(Outcome::new(result_output(&res, a.output.format), &a.output.out))
}

fn sweep(a: &SweepArgs) -> Result<Outcome, CliError> {
    if a.d_min > a.d_max {
        return Err(CliError::usage("--d-min must not exceed --d-max"));
    }
    let template = search_config(a.d_min.max(2), &a.search)?;
    let rows = optimizer::sweep(a.d_min..=a.d_max, &template)?;
    let output = match a.output.format {
        OutputFormat::Csv => optimizer::sweep_csv(&rows),
        OutputFormat::Json => to_json(
            &rows
                .iter()
                .map(|r| json!({"D": r.dim, "cbar": r.cbar, "edges": edges_field(&r.graph)}))
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome::new(output, &a.output.out))
}

/// `points` horizons spaced evenly in `log T` over `[t_min, t_max]`.
pub fn log_grid(t_min: f64, t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => {
            let (lo, hi) = (t_min.ln(), t_max.ln());
            (0..points)
                .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp())
                .collect()
        }
    }
}

fn convergence(a: &ConvergenceArgs) -> Result<Outcome, CliError> {
    let g = load_graph(&a.source)?;
    let w = load_weights(&a.weights)?;
    let horizons = match &a.t {
        Some(ts) => ts.clone(),
        None => {
            if !(a.t_min > 0.0 && a.t_max >= a.t_min) {
                return Err(CliError::usage("need 0 < --t-min <= --t-max"));
            }
            log_grid(a.t_min, a.t_max, a.points)
        }
    };
    if let Some(t) = horizons.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(CliError::usage(format!("horizon {t} must be positive and finite")));
    }
    let report = krylov::cbar(&g, a.seed_vertex, &w)?;
    let dynamics = SpreadDynamics::new(&g, a.seed_vertex)?;
    let weights = w.values(dynamics.krylov_dim())?;
    let rows: Vec<(f64, f64)> = horizons
        .iter()
        .map(|&t| (t, dynamics.time_average(t, &weights)))
        .collect();
    let output = match a.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("T,cbar_T,cbar_infinity\n");
            for (t, c) in &rows {
                s.push_str(&format!("{t},{c},{}\n", report.cbar));
            }
            s
        }
        OutputFormat::Json => to_json(
            &rows
                .iter()
                .map(|(t, c)| json!({"T": t, "cbar_T": c, "cbar_infinity": report.cbar}))
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Outcome::new(output, &a.output.out))
}

fn limiting(a: &LimitingArgs) -> Result<Outcome, CliError> {
    let g = load_graph(&a.source)?;
    let chi = krylov::limiting_distribution(&g, a.seed_vertex)?;
    let exit = match (a.source.graph.as_ref(), family_from_args(&a.source.family)) {
        (None, Ok(f @ Family::GluedTree { n })) => {
            let predicted = cbar_closed_form(f)?.kappa.and_then(|k| k.last().copied());
            Some((GluedTree::new(n)?.exit(), predicted))
        }
        _ => None,
    };
    let output = match a.output.format {
        OutputFormat::Csv => {
            let mut s = String::from("vertex,chi\n");
            for (i, c) in chi.iter().enumerate() {
                s.push_str(&format!("{i},{c}\n"));
            }
            s
        }
        OutputFormat::Json => {
            let mut v = json!({"seed": a.seed_vertex, "chi": chi});
            if let Some((e, predicted)) = exit {
                v["exit_vertex"] = json!(e);
                v["chi_exit"] = json!(chi[e]);
                v["kappa_last"] = json!(predicted);
            }
            to_json(&v)
        }
    };
    Ok(Outcome::new(output, &a.output.out))
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Generate(a) => generate(a),
        Command::Optimize(a) => optimize(a),
        Command::BruteForce(a) => brute_force(a),
        Command::Sweep(a) => sweep(a),
        Command::Convergence(a) => convergence(a),
        Command::Limiting(a) => limiting(a),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError {
        code: if e.use_stderr() { EXIT_USAGE } else { 0 },
        message: e.render().to_string(),
    })?;
    execute(&cli)
}
