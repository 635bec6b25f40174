//! Query-refinement diversifiers. Each pick re-runs DaRWR after changing
//! the graph or the prior, so a run costs about `k` rankings.
//!
//! * GRASSHOPPER turns every pick into a sink and ranks by cumulative
//!   visits over a fixed horizon.
//! * GSPARSE deletes every pick and its edges.
//! * FEED keeps the graph and moves restart mass towards the seeds that are
//!   far from what was already picked.
//!
//! The eligible nodes in every round are the non-seeds that have not been
//! picked. Nodes with zero score stay eligible, so a run only comes back
//! short when the graph has fewer than `k` non-seeds.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{bfs_undirected, CitationGraph, GraphView, NodeId};
use crate::ranking::{darwr, darwr_cumulative, darwr_from, darwr_with_prior, RankParams, SeedSet};
use crate::select::{best_eligible, Algorithm, Flag, Recommendation, RecommendationSet};

/// What happened in one refinement round.
#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    pub pick: NodeId,
    /// Score the pick was chosen by (cumulative mass for GRASSHOPPER).
    pub score: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Graph or prior change applied before this round's ranking.
    pub change: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTrace {
    pub algorithm: Algorithm,
    pub rounds: Vec<Round>,
}

impl RefinementTrace {
    fn new(algorithm: Algorithm) -> Self {
        RefinementTrace { algorithm, rounds: Vec::new() }
    }

    pub fn picks(&self) -> Vec<NodeId> {
        self.rounds.iter().map(|r| r.pick).collect()
    }
}

impl fmt::Display for RefinementTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rounds.iter().enumerate() {
            writeln!(
                f,
                "{} round {i}: pick {} score {:.9e} iterations {}{} [{}]",
                self.algorithm,
                r.pick,
                r.score,
                r.iterations,
                if r.converged { "" } else { " (not converged)" },
                r.change,
            )?;
        }
        Ok(())
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    Ok(())
}

fn finish(trace: &RefinementTrace, k: usize, not_converged: bool) -> RecommendationSet {
    let mut set = RecommendationSet::new(trace.algorithm, k);
    set.items.extend(trace.rounds.iter().map(|r| Recommendation { node: r.pick, score: r.score }));
    set.mark_partial();
    if not_converged {
        set.flags.set(Flag::NotConverged);
    }
    set
}

/// Absorbing-walk diversification with iterative cumulative ranks.
///
/// Round 0 is a plain converged DaRWR. Every later round sinks all picks so
/// far and sums `T` DaRWR iterates, where `T` is the round-0 iteration count.
pub fn grasshopper(
    g: &CitationGraph,
    seeds: &SeedSet,
    params: &RankParams,
    k: usize,
) -> Result<(RecommendationSet, RefinementTrace)> {
    check_k(k)?;
    let base = darwr(g, seeds, params)?;
    let mut trace = RefinementTrace::new(Algorithm::Grasshopper);
    let mut picked = vec![false; g.node_count()];
    let eligible = |picked: &[bool], v: NodeId| !seeds.contains(v) && !picked[v as usize];
    let Some(first) = best_eligible(&base.scores, |v| eligible(&picked, v)) else {
        return Ok((finish(&trace, k, !base.converged), trace));
    };
    picked[first as usize] = true;
    trace.rounds.push(Round {
        pick: first,
        score: base.scores[first as usize],
        iterations: base.iterations,
        converged: base.converged,
        change: "none".into(),
    });

    let horizon = base.iterations.max(1);
    let prior = seeds.uniform_prior();
    let mut view = GraphView::new(g);
    let mut last = first;
    while trace.rounds.len() < k {
        view.make_sink(last)?;
        let (total, final_iterate) = darwr_cumulative(&view, &prior, params, horizon)?;
        let Some(pick) = best_eligible(&total, |v| eligible(&picked, v)) else { break };
        if log::log_enabled!(log::Level::Debug) {
            let by_final = best_eligible(&final_iterate.scores, |v| eligible(&picked, v));
            log::debug!("grasshopper: cumulative pick {pick}, final-iterate pick {by_final:?}");
        }
        picked[pick as usize] = true;
        trace.rounds.push(Round {
            pick,
            score: total[pick as usize],
            iterations: horizon,
            converged: true,
            change: format!("sink {last}"),
        });
        last = pick;
    }
    Ok((finish(&trace, k, !base.converged), trace))
}

/// Diversification by graph sparsification: rank, take the best eligible
/// node, delete it with its edges, repeat.
///
/// With `warm_start` each round starts from the previous round's vector
/// instead of the prior.
pub fn gsparse(
    g: &CitationGraph,
    seeds: &SeedSet,
    params: &RankParams,
    k: usize,
    warm_start: bool,
) -> Result<(RecommendationSet, RefinementTrace)> {
    check_k(k)?;
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let prior = seeds.uniform_prior();
    let mut view = GraphView::new(g);
    let mut trace = RefinementTrace::new(Algorithm::Gsparse);
    let mut picked = vec![false; g.node_count()];
    let mut previous: Option<Vec<f64>> = None;
    let mut not_converged = false;
    let mut change = String::from("none");
    while trace.rounds.len() < k {
        let init = if warm_start { previous.as_deref() } else { None };
        let rv = darwr_from(&view, &prior, params, init)?;
        not_converged |= !rv.converged;
        let Some(pick) = best_eligible(&rv.scores, |v| !seeds.contains(v) && !picked[v as usize]) else {
            break;
        };
        picked[pick as usize] = true;
        trace.rounds.push(Round {
            pick,
            score: rv.scores[pick as usize],
            iterations: rv.iterations,
            converged: rv.converged,
            change: std::mem::take(&mut change),
        });
        let before = view.edge_count();
        view.remove_vertex(pick)?;
        change = format!("removed {pick} ({} edges)", before - view.edge_count());
        previous = Some(rv.scores);
    }
    Ok((finish(&trace, k, not_converged), trace))
}

/// Median with the mean of the middle pair for even lengths.
fn median(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Restart distribution for the next FEED round: each seed is weighted by
/// the median undirected distance from the picks so far, then normalized.
/// Returns `None` when the weights cannot be normalized.
pub fn feed_prior(seed_distances: &[(NodeId, Vec<u32>)], picks: &[NodeId]) -> Option<Vec<(NodeId, f64)>> {
    let weights: Vec<(NodeId, f64)> = seed_distances
        .iter()
        .map(|(s, dist)| {
            let mut ds: Vec<f64> = picks.iter().map(|&r| dist[r as usize] as f64).collect();
            (*s, median(&mut ds))
        })
        .collect();
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    if !(total > 0.0 && total.is_finite()) {
        return None;
    }
    Some(weights.into_iter().map(|(s, w)| (s, w / total)).collect())
}

/// Prior reweighting: seeds far from everything picked so far get more of
/// the restart mass in the next round.
pub fn feed(
    g: &CitationGraph,
    seeds: &SeedSet,
    params: &RankParams,
    k: usize,
) -> Result<(RecommendationSet, RefinementTrace)> {
    check_k(k)?;
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let seed_distances =
        seeds.ids().iter().map(|&s| Ok((s, bfs_undirected(g, s)?.dist))).collect::<Result<Vec<_>>>()?;
    let uniform = seeds.uniform_prior();
    let mut trace = RefinementTrace::new(Algorithm::Feed);
    let mut picked = vec![false; g.node_count()];
    let mut picks: Vec<NodeId> = Vec::with_capacity(k);
    let mut not_converged = false;
    let mut fallback = false;
    while picks.len() < k {
        let (prior, change) = if picks.is_empty() {
            (uniform.clone(), "uniform prior".to_string())
        } else {
            match feed_prior(&seed_distances, &picks) {
                Some(p) => {
                    let desc = p.iter().map(|(s, w)| format!("{s}:{w:.6}")).collect::<Vec<_>>().join(" ");
                    (p, format!("prior {desc}"))
                }
                None => {
                    log::warn!("feed: degenerate prior weights, using the uniform seed prior");
                    fallback = true;
                    (uniform.clone(), "uniform prior (fallback)".to_string())
                }
            }
        };
        let rv = darwr_with_prior(g, &prior, params)?;
        not_converged |= !rv.converged;
        let Some(pick) = best_eligible(&rv.scores, |v| !seeds.contains(v) && !picked[v as usize]) else {
            break;
        };
        picked[pick as usize] = true;
        picks.push(pick);
        trace.rounds.push(Round {
            pick,
            score: rv.scores[pick as usize],
            iterations: rv.iterations,
            converged: rv.converged,
            change,
        });
    }
    let mut set = finish(&trace, k, not_converged);
    if fallback {
        set.flags.set(Flag::PriorFallback);
    }
    Ok((set, trace))
}
