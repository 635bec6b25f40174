//! Local-maxima selection (LM) and its relaxed, pool-restricted form (RLM).
//!
//! A node is a local maximum when its score is strictly greater than the
//! score of every undirected neighbor. Seeds are taken out of the graph
//! before the comparison: they are never candidates and never block one.
//! Equal scores demote both nodes, so two adjacent nodes can never both be
//! maxima.

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, NodeId, Topology};
use crate::ranking::SeedSet;

use super::{ranked_candidates, score_order, Algorithm, RecommendationSet};

/// Marking pass over `candidates` (ascending IDs), comparing only against
/// neighbors for which `in_pool` holds. Each comparison between two unmarked
/// nodes retires one of them, so most nodes settle after a few neighbor reads.
fn mark_maxima<F>(g: &CitationGraph, scores: &[f64], candidates: &[NodeId], in_pool: F) -> Vec<NodeId>
where
    F: Fn(NodeId) -> bool,
{
    let mut is_max = vec![false; g.node_count()];
    for &v in candidates {
        is_max[v as usize] = true;
    }
    for &v in candidates {
        if !is_max[v as usize] {
            continue;
        }
        let pv = scores[v as usize];
        for w in g.undirected_neighbors(v) {
            if !in_pool(w) {
                continue;
            }
            if scores[w as usize] < pv {
                is_max[w as usize] = false;
            } else {
                is_max[v as usize] = false;
                break;
            }
        }
    }
    candidates.iter().copied().filter(|&v| is_max[v as usize]).collect()
}

/// All non-seed local maxima, best first.
pub fn local_maxima(g: &CitationGraph, scores: &[f64], seeds: &SeedSet) -> Vec<NodeId> {
    let candidates: Vec<NodeId> = (0..g.node_count() as NodeId).filter(|&v| !seeds.contains(v)).collect();
    let mut maxima = mark_maxima(g, scores, &candidates, |v| !seeds.contains(v));
    maxima.sort_unstable_by(|&a, &b| score_order(scores, a, b));
    maxima
}

/// The `k` best local maxima.
pub fn local_maxima_select(g: &CitationGraph, scores: &[f64], seeds: &SeedSet, k: usize) -> RecommendationSet {
    let mut maxima = local_maxima(g, scores, seeds);
    maxima.truncate(k);
    RecommendationSet::from_nodes(Algorithm::Lm, k, maxima, scores)
}

/// Selection passes of relaxed local maxima.
///
/// The pool starts as the `gamma * k` best non-seed nodes. Each pass takes
/// the local maxima of the subgraph induced by the pool (best first, up to
/// the remaining quota) and removes them from the pool. A pass that finds
/// no maximum, which only happens when every pool component is a plateau of
/// equal scores, falls back to breaking ties by node ID.
pub fn rlm_passes(
    g: &CitationGraph,
    scores: &[f64],
    seeds: &SeedSet,
    k: usize,
    gamma: usize,
) -> Result<Vec<Vec<NodeId>>> {
    if gamma == 0 {
        return Err(Error::param("gamma must be at least 1"));
    }
    let pool_size = gamma.saturating_mul(k);
    let mut pool: Vec<NodeId> = ranked_candidates(scores, seeds, pool_size);
    pool.sort_unstable();
    let mut in_pool = vec![false; g.node_count()];
    for &v in &pool {
        in_pool[v as usize] = true;
    }
    let mut selected = 0usize;
    let mut passes = Vec::new();
    while selected < k && !pool.is_empty() {
        let mut found = mark_maxima(g, scores, &pool, |v| in_pool[v as usize]);
        if found.is_empty() {
            found = pool
                .iter()
                .copied()
                .filter(|&v| {
                    g.undirected_neighbors(v)
                        .filter(|&w| in_pool[w as usize])
                        .all(|w| score_order(scores, v, w).is_lt())
                })
                .collect();
        }
        found.sort_unstable_by(|&a, &b| score_order(scores, a, b));
        found.truncate(k - selected);
        for &v in &found {
            in_pool[v as usize] = false;
        }
        pool.retain(|&v| in_pool[v as usize]);
        selected += found.len();
        passes.push(found);
    }
    Ok(passes)
}

/// Relaxed local maxima (gamma-RLM). The result is listed best score first.
///
/// With `gamma = 1` the pool is exactly the top `k` and the output equals
/// plain top-k. As `gamma` grows the first pass approaches the LM selection.
pub fn rlm_select(
    g: &CitationGraph,
    scores: &[f64],
    seeds: &SeedSet,
    k: usize,
    gamma: usize,
) -> Result<RecommendationSet> {
    let mut picked: Vec<NodeId> = rlm_passes(g, scores, seeds, k, gamma)?.into_iter().flatten().collect();
    picked.sort_unstable_by(|&a, &b| score_order(scores, a, b));
    Ok(RecommendationSet::from_nodes(Algorithm::Rlm(Some(gamma as u32)), k, picked, scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::select::top_k;

    fn p3() -> CitationGraph {
        CitationGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap().0
    }

    const PI: [f64; 3] = [0.5, 0.25, 0.125];

    /// Straight definition: strictly above every non-seed neighbor.
    fn brute_maxima(g: &CitationGraph, scores: &[f64], seeds: &SeedSet) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = (0..g.node_count() as NodeId)
            .filter(|&v| !seeds.contains(v))
            .filter(|&v| {
                g.undirected_neighbors(v)
                    .filter(|&w| !seeds.contains(w))
                    .all(|w| scores[w as usize] < scores[v as usize])
            })
            .collect();
        out.sort_by(|&a, &b| score_order(scores, a, b));
        out
    }

    #[test]
    fn lm_on_path() {
        let set = local_maxima_select(&p3(), &PI, &SeedSet::empty(3), 2);
        assert_eq!(set.nodes(), vec![0]);
        assert!(set.is_partial());
    }

    #[test]
    fn lm_star() {
        let g = CitationGraph::from_edges(5, [(1, 0), (2, 0), (3, 0), (4, 0)]).unwrap().0;
        let scores = [1.0, 0.1, 0.1, 0.1, 0.1];
        assert_eq!(local_maxima_select(&g, &scores, &SeedSet::empty(5), 1).nodes(), vec![0]);
    }

    #[test]
    fn lm_one_per_component() {
        let g = CitationGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap().0;
        let scores = [0.4, 0.1, 0.3, 0.2];
        assert_eq!(local_maxima_select(&g, &scores, &SeedSet::empty(4), 2).nodes(), vec![0, 2]);
    }

    #[test]
    fn lm_ties_demote_both() {
        let g = CitationGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap().0;
        let scores = [0.5, 0.5, 0.1];
        assert!(local_maxima(&g, &scores, &SeedSet::empty(3)).is_empty());
    }

    #[test]
    fn lm_ignores_seed_neighbors() {
        let g = p3();
        let seeds = SeedSet::new(3, [0]).unwrap();
        assert_eq!(local_maxima(&g, &PI, &seeds), vec![1]);
    }

    #[test]
    fn marking_matches_definition() {
        let g = CitationGraph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (2, 6)],
        )
        .unwrap()
        .0;
        let scores = [0.3, 0.2, 0.3, 0.05, 0.6, 0.1, 0.6, 0.0];
        for seeds in [SeedSet::empty(8), SeedSet::new(8, [4]).unwrap(), SeedSet::new(8, [0, 6]).unwrap()] {
            assert_eq!(local_maxima(&g, &scores, &seeds), brute_maxima(&g, &scores, &seeds));
        }
    }

    #[test]
    fn rlm_gamma_one_is_top_k() {
        let set = rlm_select(&p3(), &PI, &SeedSet::empty(3), 2, 1).unwrap();
        assert_eq!(set.nodes(), vec![0, 1]);
        assert_eq!(set.nodes(), top_k(&PI, &SeedSet::empty(3), 2).nodes());
    }

    #[test]
    fn rlm_trace_on_path() {
        // pool {0,1,2}: pass 1 finds only 0; pass 2 finds 1 in the remaining {1,2}
        let passes = rlm_passes(&p3(), &PI, &SeedSet::empty(3), 2, 2).unwrap();
        assert_eq!(passes, vec![vec![0], vec![1]]);
        let set = rlm_select(&p3(), &PI, &SeedSet::empty(3), 2, 2).unwrap();
        assert_eq!(set.nodes(), vec![0, 1]);
        assert_eq!(set.algorithm, Algorithm::Rlm(Some(2)));
    }

    #[test]
    fn rlm_plateau_falls_back_to_id_order() {
        let g = CitationGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap().0;
        let flat = [0.2, 0.2, 0.2];
        let set = rlm_select(&g, &flat, &SeedSet::empty(3), 3, 1).unwrap();
        assert_eq!(set.nodes(), vec![0, 1, 2]);
        assert!(!set.is_partial());
    }

    #[test]
    fn rlm_rejects_zero_gamma() {
        assert!(rlm_select(&p3(), &PI, &SeedSet::empty(3), 2, 0).is_err());
    }
}
