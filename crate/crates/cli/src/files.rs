use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use citediv::synth::{generate_synthetic, synthetic_queries};
use citediv::CitationGraph;
use log::{info, warn};

use crate::aggregate::{aggregate, write_aggregate};
use crate::config::{ExperimentConfig, GraphSource};
use crate::error::{HarnessError, Result};
use crate::output::{write_recommendations, write_results};
use crate::queries::{from_seed_sets, parse_queries, Query};
use crate::runner::{run_experiment, ExperimentOutput};

pub const RESULTS_FILE: &str = "results.csv";
pub const RECOMMENDATIONS_FILE: &str = "recommendations.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| HarnessError::io(path, e))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| HarnessError::io(path, e))
}

/// Reads an edge list and optional year metadata.
pub fn load_graph(edges: &Path, metadata: Option<&Path>) -> Result<CitationGraph> {
    let (mut g, stats) =
        CitationGraph::read_edge_list(open(edges)?, None).map_err(|e| HarnessError::input(edges, e))?;
    if stats.duplicates + stats.self_loops > 0 {
        warn!(
            "{}: dropped {} duplicate edge(s) and {} self-loop(s)",
            edges.display(),
            stats.duplicates,
            stats.self_loops
        );
    }
    if let Some(meta) = metadata {
        g.read_metadata(open(meta)?).map_err(|e| HarnessError::input(meta, e))?;
    }
    info!("loaded {} nodes and {} edges", g.node_count(), g.edge_count());
    Ok(g)
}

pub fn load_queries(path: &Path) -> Result<Vec<Query>> {
    parse_queries(open(path)?).map_err(|e| match e {
        HarnessError::Data(msg) => HarnessError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Builds or loads the graph and queries an experiment runs on.
pub fn prepare(cfg: &ExperimentConfig) -> Result<(CitationGraph, Vec<Query>)> {
    let g = match &cfg.graph {
        GraphSource::Files { edges, metadata } => load_graph(edges, metadata.as_deref())?,
        GraphSource::Synthetic(synth) => generate_synthetic(synth).map_err(|e| HarnessError::config(e.to_string()))?,
    };
    let queries = match &cfg.queries {
        Some(path) => load_queries(path)?,
        None => from_seed_sets(
            synthetic_queries(&g, &cfg.synthetic_queries).map_err(|e| HarnessError::config(e.to_string()))?,
        ),
    };
    Ok((g, queries))
}

/// Runs a full experiment and writes the results, recommendations and
/// aggregate tables into the output directory.
pub fn run_bench(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.run.validate()?;
    let (g, queries) = prepare(cfg)?;
    let out = run_experiment(&g, &queries, &cfg.run)?;
    fs::create_dir_all(&cfg.out_dir).map_err(|e| HarnessError::io(&cfg.out_dir, e))?;
    let ells = &cfg.run.ells;
    write_results(create(&cfg.out_dir.join(RESULTS_FILE))?, &out.results, ells)?;
    write_recommendations(create(&cfg.out_dir.join(RECOMMENDATIONS_FILE))?, &out.recommendations)?;
    write_aggregate(create(&cfg.out_dir.join(AGGREGATE_FILE))?, &aggregate(&out.results, ells), ells)?;
    Ok(out)
}
