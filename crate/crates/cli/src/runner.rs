use std::collections::BTreeMap;
use std::time::Instant;

use citediv::refine::{feed, grasshopper, gsparse};
use citediv::select::{divrank, dragon_select, il_select, local_maxima_select, rlm_select, top_k_as, VisitEstimate};
use citediv::{
    darwr, evaluate, pagerank, ppr, Algorithm, CitationGraph, Flag, MetricsReport, NodeId, QueryContext, RankVector,
    Recommendation, RecommendationSet, SeedSet,
};
use log::warn;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::queries::Query;

/// One cell of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub query_id: usize,
    pub algorithm: Algorithm,
    pub k: usize,
    /// Measures, or the reason the cell could not be computed.
    pub outcome: std::result::Result<MetricsReport, String>,
    /// False when the set was read back rather than computed here.
    pub timed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationRow {
    pub query_id: usize,
    pub algorithm: Algorithm,
    pub k: usize,
    /// Position in the set, from 1.
    pub rank: usize,
    pub node: NodeId,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentOutput {
    pub results: Vec<ResultRow>,
    pub recommendations: Vec<RecommendationRow>,
}

/// Runs `f` once and returns its output with the wall time in milliseconds.
pub fn time_algorithm<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Runs one algorithm for one query. `baseline` is the query's DaRWR
/// ranking, which the one-shot selectors work from.
pub fn run_algorithm(
    g: &CitationGraph,
    seeds: &SeedSet,
    algorithm: Algorithm,
    k: usize,
    cfg: &RunConfig,
    baseline: &RankVector,
) -> citediv::Result<RecommendationSet> {
    let params = &cfg.params;
    let scores = &baseline.scores[..];
    let mut set = match algorithm {
        Algorithm::Darwr => top_k_as(algorithm, scores, seeds, k),
        Algorithm::Ppr => {
            let rv = ppr(g, seeds, params)?;
            with_convergence(top_k_as(algorithm, &rv.scores, seeds, k), &rv)
        }
        Algorithm::PageRank => {
            let rv = pagerank(g, params)?;
            with_convergence(top_k_as(algorithm, &rv.scores, seeds, k), &rv)
        }
        Algorithm::Il1 => il_select(g, scores, seeds, k, 1)?,
        Algorithm::Il2 => il_select(g, scores, seeds, k, 2)?,
        Algorithm::Lm => local_maxima_select(g, scores, seeds, k),
        Algorithm::Rlm(gamma) => {
            let gamma = gamma.or(cfg.gamma).map_or(k, |x| x as usize);
            rlm_select(g, scores, seeds, k, gamma)?
        }
        Algorithm::Dragon => dragon_select(g, scores, seeds, k, params),
        Algorithm::PDivRank => divrank(g, seeds, params, &cfg.divrank(VisitEstimate::Pointwise), k)?.0,
        Algorithm::CDivRank => divrank(g, seeds, params, &cfg.divrank(VisitEstimate::Cumulative), k)?.0,
        Algorithm::Grasshopper => grasshopper(g, seeds, params, k)?.0,
        Algorithm::Gsparse => gsparse(g, seeds, params, k, false)?.0,
        Algorithm::Feed => feed(g, seeds, params, k)?.0,
    };
    if uses_baseline(algorithm) && !baseline.converged {
        set.flags.set(Flag::NotConverged);
    }
    set.algorithm = algorithm;
    Ok(set)
}

fn with_convergence(mut set: RecommendationSet, rv: &RankVector) -> RecommendationSet {
    if !rv.converged {
        set.flags.set(Flag::NotConverged);
    }
    set
}

/// Whether the algorithm selects from the query's DaRWR ranking, so that
/// ranking counts towards its runtime.
pub fn uses_baseline(algorithm: Algorithm) -> bool {
    matches!(
        algorithm,
        Algorithm::Darwr | Algorithm::Il1 | Algorithm::Il2 | Algorithm::Lm | Algorithm::Rlm(_) | Algorithm::Dragon
    )
}

fn error_rows(query_id: usize, cfg: &RunConfig, message: &str) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for &algorithm in &cfg.algorithms {
        for &k in &cfg.ks {
            rows.push(ResultRow { query_id, algorithm, k, outcome: Err(message.to_string()), timed: true });
        }
    }
    rows
}

/// Seeds of `query` known to `g`, or the reason there are none.
fn query_seeds(g: &CitationGraph, query: &Query) -> std::result::Result<SeedSet, String> {
    let (known, unknown) = query.resolve(g.node_count());
    if !unknown.is_empty() {
        warn!("query {}: dropping {} unknown seed(s) {:?}", query.id, unknown.len(), unknown);
    }
    if known.is_empty() {
        return Err("no known seeds".to_string());
    }
    SeedSet::new(g.node_count(), known).map_err(|e| e.to_string())
}

/// Every (algorithm, k) cell of one query, in configuration order.
pub fn run_query(g: &CitationGraph, query: &Query, cfg: &RunConfig) -> ExperimentOutput {
    let seeds = match query_seeds(g, query) {
        Ok(s) => s,
        Err(msg) => {
            warn!("query {}: skipped, {msg}", query.id);
            return ExperimentOutput { results: error_rows(query.id, cfg, &msg), recommendations: Vec::new() };
        }
    };
    let (baseline, baseline_ms) = time_algorithm(|| darwr(g, &seeds, &cfg.params));
    let baseline = match baseline {
        Ok(rv) => rv,
        Err(e) => {
            return ExperimentOutput { results: error_rows(query.id, cfg, &e.to_string()), recommendations: Vec::new() }
        }
    };
    let ctx = QueryContext::new(g, &seeds, &baseline.scores, cfg.params, cfg.ells.clone(), cfg.rule);
    let mut out = ExperimentOutput::default();
    for &algorithm in &cfg.algorithms {
        for &k in &cfg.ks {
            let (set, mut ms) = time_algorithm(|| run_algorithm(g, &seeds, algorithm, k, cfg, &baseline));
            if uses_baseline(algorithm) {
                ms += baseline_ms;
            }
            let outcome = set.map(|set| {
                let mut report = evaluate(&ctx, &set, k);
                report.runtime_ms = ms;
                out.recommendations.extend(set.items.iter().enumerate().map(|(i, r)| RecommendationRow {
                    query_id: query.id,
                    algorithm,
                    k,
                    rank: i + 1,
                    node: r.node,
                    score: r.score,
                }));
                report
            });
            out.results.push(ResultRow {
                query_id: query.id,
                algorithm,
                k,
                outcome: outcome.map_err(|e| e.to_string()),
                timed: true,
            });
        }
    }
    out
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::config(format!("cannot start worker pool: {e}")))
}

/// Runs every query on a pool of `cfg.threads` workers. Rows come back
/// ordered by query, then by the configured algorithm and k order, whatever
/// the thread count.
pub fn run_experiment(g: &CitationGraph, queries: &[Query], cfg: &RunConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    if queries.is_empty() {
        warn!("no queries to run");
    }
    let mut parts: Vec<ExperimentOutput> =
        pool(cfg.threads)?.install(|| queries.par_iter().map(|q| run_query(g, q, cfg)).collect());
    parts.sort_by_key(|p| p.results.first().map(|r| r.query_id));
    let mut out = ExperimentOutput::default();
    for p in parts {
        out.results.extend(p.results);
        out.recommendations.extend(p.recommendations);
    }
    Ok(out)
}

/// Algorithm and k of one result cell.
type Cell = (Algorithm, usize);

/// Scores recommendation rows read back from a file. Runtime is not
/// measured.
pub fn rescore(
    g: &CitationGraph,
    queries: &[Query],
    recommendations: &[RecommendationRow],
    cfg: &RunConfig,
) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut cells: BTreeMap<(usize, Algorithm, usize), Vec<&RecommendationRow>> = BTreeMap::new();
    for r in recommendations {
        cells.entry((r.query_id, r.algorithm, r.k)).or_default().push(r);
    }
    let mut by_query: BTreeMap<usize, Vec<(Cell, Vec<&RecommendationRow>)>> = BTreeMap::new();
    for ((q, a, k), mut rows) in cells {
        rows.sort_by_key(|r| r.rank);
        by_query.entry(q).or_default().push(((a, k), rows));
    }
    let mut out = Vec::new();
    for (query_id, cells) in by_query {
        let query = queries.iter().find(|q| q.id == query_id).ok_or_else(|| {
            HarnessError::Data(format!("recommendations name query {query_id}, which does not exist"))
        })?;
        let prepared = query_seeds(g, query).and_then(|seeds| {
            let rv = darwr(g, &seeds, &cfg.params).map_err(|e| e.to_string())?;
            Ok((seeds, rv))
        });
        for ((algorithm, k), rows) in cells {
            let outcome = match &prepared {
                Err(msg) => Err(msg.clone()),
                Ok((seeds, rv)) => {
                    if let Some(r) = rows.iter().find(|r| r.node as usize >= g.node_count()) {
                        return Err(HarnessError::Data(format!(
                            "query {query_id}: node {} is not in the graph",
                            r.node
                        )));
                    }
                    let ctx = QueryContext::new(g, seeds, &rv.scores, cfg.params, cfg.ells.clone(), cfg.rule);
                    let mut set = RecommendationSet {
                        algorithm,
                        requested: k,
                        items: rows.iter().map(|r| Recommendation { node: r.node, score: r.score }).collect(),
                        flags: Default::default(),
                    };
                    if set.len() < k {
                        set.flags.set(Flag::Partial);
                    }
                    Ok(evaluate(&ctx, &set, k))
                }
            };
            out.push(ResultRow { query_id, algorithm, k, outcome, timed: false });
        }
    }
    Ok(out)
}
