use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use citediv::synth::{generate_synthetic, synthetic_queries, QueryConfig, SynthConfig};
use citediv::{darwr, Algorithm, RankParams, SeedSet, UsefulnessRule};
use citediv_cli::aggregate::write_sweep;
use citediv_cli::config::{DEFAULT_ELLS, DEFAULT_KS};
use citediv_cli::files::{create, load_graph, load_queries, open, prepare, run_bench};
use citediv_cli::output::{read_recommendations, write_recommendations, write_results};
use citediv_cli::queries::{format_queries, from_seed_sets};
use citediv_cli::{
    rescore, run_algorithm, run_sweep, ExperimentConfig, GraphSource, HarnessError, Query, RecommendationRow, Result,
    RunConfig, SweepParam,
};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;

/// Ranking and diversification experiments on citation graphs.
#[derive(Parser)]
#[command(name = "citediv", version)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    /// Only errors in the log.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one query and print its recommendations.
    Rank(RankArgs),
    /// Run every query with every algorithm and k, writing CSV tables.
    Bench(BenchArgs),
    /// Repeat the experiment over values of gamma, kappa or d.
    Sweep(SweepArgs),
    /// Generate a year-layered synthetic citation graph and queries.
    Synth(SynthArgs),
    /// Score an existing recommendations table.
    Measure(MeasureArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Damping factor d.
    #[arg(long, default_value_t = 0.9)]
    damping: f64,
    /// Share of the walk that follows citations.
    #[arg(long, default_value_t = 0.75)]
    kappa: f64,
    /// L2 convergence threshold.
    #[arg(long, default_value_t = 1e-8)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Hand a missing reference or citation channel's weight to the other.
    #[arg(long)]
    renormalize_dangling: bool,
    /// DivRank reinforcement exponent.
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// RLM pool multiplier; defaults to k.
    #[arg(long)]
    gamma: Option<u32>,
}

impl ParamArgs {
    fn rank_params(&self) -> RankParams {
        RankParams {
            damping: self.damping,
            kappa: self.kappa,
            epsilon: self.epsilon,
            max_iters: self.max_iters,
            renormalize_dangling: self.renormalize_dangling,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    WithinTop,
    AtMost,
}

#[derive(Args)]
struct MeasureOptions {
    /// Depths for the density and expansion columns.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ELLS)]
    ells: Vec<u32>,
    /// How usefulness compares scores with rank 10k.
    #[arg(long, value_enum, default_value_t = Rule::WithinTop)]
    usefulness: Rule,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list, one `citing cited` pair per line. Without it a synthetic
    /// graph is generated.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Year metadata, one `id year` pair per line.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Query file, comma-separated seed IDs per line. Without it queries are
    /// drawn from the graph.
    #[arg(long)]
    queries: Option<PathBuf>,
    #[command(flatten)]
    synth: SynthShape,
    /// Number of generated queries.
    #[arg(long, default_value_t = 50)]
    query_count: usize,
}

#[derive(Args)]
struct SynthShape {
    /// Synthetic graph size.
    #[arg(long, default_value_t = 10_000)]
    nodes: usize,
    /// Synthetic year layers.
    #[arg(long, default_value_t = 10)]
    layers: usize,
    /// Synthetic mean references per node.
    #[arg(long, default_value_t = 5.0)]
    degree: f64,
    /// Seed for synthetic graphs and queries.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl SynthShape {
    fn config(&self) -> SynthConfig {
        SynthConfig::new(self.nodes, self.layers, self.degree, self.seed)
    }
}

#[derive(Args)]
struct RunArgs {
    /// Algorithms to run; defaults to the baseline and all ten diversifiers.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// Result sizes.
    #[arg(short, long = "k", value_delimiter = ',', default_values_t = DEFAULT_KS)]
    ks: Vec<usize>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    measure: MeasureOptions,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl RunArgs {
    fn config(&self, default_algorithms: Vec<Algorithm>) -> RunConfig {
        RunConfig {
            algorithms: self.algorithms.clone().unwrap_or(default_algorithms),
            ks: self.ks.clone(),
            params: self.params.rank_params(),
            alpha: self.params.alpha,
            gamma: self.params.gamma,
            ells: self.measure.ells.clone(),
            rule: rule(self.measure.usefulness),
            threads: self.threads,
        }
    }
}

fn rule(r: Rule) -> UsefulnessRule {
    match r {
        Rule::WithinTop => UsefulnessRule::WithinTop,
        Rule::AtMost => UsefulnessRule::AtMostThreshold,
    }
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Comma-separated seed IDs.
    #[arg(long, required = true, value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, default_value = "darwr")]
    algorithm: Algorithm,
    #[arg(short, default_value_t = 10)]
    k: usize,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: GraphArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter to vary: gamma, kappa or d.
    #[arg(long)]
    param: SweepParam,
    /// Values to try.
    #[arg(long, required = true, value_delimiter = ',')]
    values: Vec<f64>,
    #[command(flatten)]
    input: GraphArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Output CSV file.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    shape: SynthShape,
    /// Research topics; defaults to one per 200 nodes.
    #[arg(long)]
    topics: Option<usize>,
    /// Share of references drawn from the citing node's topic.
    #[arg(long)]
    affinity: Option<f64>,
    /// Year of the oldest layer.
    #[arg(long, default_value_t = 1990)]
    first_year: i32,
    /// Queries to draw; 0 writes no query file.
    #[arg(long, default_value_t = 50)]
    query_count: usize,
    /// Output directory for graph.txt, meta.txt and queries.txt.
    #[arg(long, default_value = "synth")]
    out: PathBuf,
}

#[derive(Args)]
struct MeasureArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    meta: Option<PathBuf>,
    /// The query file the recommendations were computed for.
    #[arg(long)]
    queries: PathBuf,
    /// Recommendations table as written by `bench`.
    #[arg(long)]
    recommendations: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    measure: MeasureOptions,
    /// Output CSV file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn experiment(input: &GraphArgs, run: RunConfig, out_dir: PathBuf) -> ExperimentConfig {
    let graph = match &input.graph {
        Some(edges) => GraphSource::Files { edges: edges.clone(), metadata: input.meta.clone() },
        None => GraphSource::Synthetic(input.synth.config()),
    };
    ExperimentConfig {
        graph,
        queries: input.queries.clone(),
        synthetic_queries: QueryConfig { count: input.query_count, seed: input.synth.seed, ..Default::default() },
        out_dir,
        run,
    }
}

fn rank(args: &RankArgs) -> Result<()> {
    let cfg = RunConfig {
        algorithms: vec![args.algorithm],
        ks: vec![args.k],
        params: args.params.rank_params(),
        alpha: args.params.alpha,
        gamma: args.params.gamma,
        ..Default::default()
    };
    cfg.validate()?;
    let g = load_graph(&args.graph, args.meta.as_deref())?;
    let query = Query { id: 0, seeds: args.seeds.clone() };
    let (known, unknown) = query.resolve(g.node_count());
    if !unknown.is_empty() {
        return Err(HarnessError::Data(format!("seeds {unknown:?} are not in the graph")));
    }
    let seeds = SeedSet::new(g.node_count(), known).map_err(|e| HarnessError::Data(e.to_string()))?;
    let baseline = darwr(&g, &seeds, &cfg.params).map_err(|e| HarnessError::config(e.to_string()))?;
    let set = run_algorithm(&g, &seeds, args.algorithm, args.k, &cfg, &baseline)
        .map_err(|e| HarnessError::config(e.to_string()))?;
    if !set.flags.is_empty() {
        log::warn!("flags: {}", set.flags);
    }
    let rows: Vec<RecommendationRow> = set
        .items
        .iter()
        .enumerate()
        .map(|(i, r)| RecommendationRow {
            query_id: 0,
            algorithm: args.algorithm,
            k: args.k,
            rank: i + 1,
            node: r.node,
            score: r.score,
        })
        .collect();
    write_recommendations(io::stdout().lock(), &rows)
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let cfg = experiment(&args.input, args.run.config(args.param.default_algorithms()), PathBuf::new());
    let (g, queries) = prepare(&cfg)?;
    let rows = run_sweep(&g, &queries, &cfg.run, args.param, &args.values)?;
    write_sweep(create(&args.out)?, args.param, &rows, &cfg.run.ells)
}

fn synth(args: &SynthArgs) -> Result<()> {
    let mut cfg = args.shape.config();
    cfg.first_year = args.first_year;
    if let Some(t) = args.topics {
        cfg.topics = t;
    }
    if let Some(a) = args.affinity {
        cfg.topic_affinity = a;
    }
    let g = generate_synthetic(&cfg).map_err(|e| HarnessError::config(e.to_string()))?;
    fs::create_dir_all(&args.out).map_err(|e| HarnessError::io(&args.out, e))?;
    let path = args.out.join("graph.txt");
    g.write_edge_list(create(&path)?).map_err(|e| HarnessError::input(&path, e))?;
    let path = args.out.join("meta.txt");
    g.write_metadata(create(&path)?).map_err(|e| HarnessError::input(&path, e))?;
    if args.query_count > 0 {
        let qcfg = QueryConfig { count: args.query_count, seed: args.shape.seed, ..Default::default() };
        let sets = synthetic_queries(&g, &qcfg).map_err(|e| HarnessError::config(e.to_string()))?;
        let path = args.out.join("queries.txt");
        let mut w = create(&path)?;
        w.write_all(format_queries(&from_seed_sets(sets)).as_bytes()).map_err(|e| HarnessError::io(&path, e))?;
        w.flush().map_err(|e| HarnessError::io(&path, e))?;
    }
    log::info!("wrote {} nodes and {} edges to {}", g.node_count(), g.edge_count(), args.out.display());
    Ok(())
}

fn measure(args: &MeasureArgs) -> Result<()> {
    let cfg = RunConfig {
        params: args.params.rank_params(),
        alpha: args.params.alpha,
        gamma: args.params.gamma,
        ells: args.measure.ells.clone(),
        rule: rule(args.measure.usefulness),
        ..Default::default()
    };
    cfg.validate()?;
    let g = load_graph(&args.graph, args.meta.as_deref())?;
    let queries = load_queries(&args.queries)?;
    let recs = read_recommendations(open(&args.recommendations)?)?;
    let rows = rescore(&g, &queries, &recs, &cfg)?;
    match &args.out {
        Some(path) => write_results(create(path)?, &rows, &cfg.ells),
        None => write_results(io::stdout().lock(), &rows, &cfg.ells),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => LevelFilter::Error,
        (false, 0) => LevelFilter::Warn,
        (false, 1) => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    let result = match &cli.command {
        Command::Rank(args) => rank(args),
        Command::Bench(args) => {
            let cfg = experiment(&args.input, args.run.config(Algorithm::STANDARD.to_vec()), args.out.clone());
            run_bench(&cfg).map(|_| ())
        }
        Command::Sweep(args) => sweep(args),
        Command::Synth(args) => synth(args),
        Command::Measure(args) => measure(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
