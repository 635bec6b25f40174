use crate::error::{Error, Result};
use crate::graph::{BoundedBfs, CitationGraph};
use crate::ranking::SeedSet;

use super::{ranked_candidates, Algorithm, RecommendationSet};

/// Greedy scan in score order that skips any node within `ell` undirected
/// hops of an already accepted node.
///
/// `ell = 1` rules out direct references and citations of earlier picks;
/// `ell = 2` also rules out co-cited and co-citing papers.
pub fn il_select(g: &CitationGraph, scores: &[f64], seeds: &SeedSet, k: usize, ell: u32) -> Result<RecommendationSet> {
    if ell == 0 {
        return Err(Error::param("ell must be at least 1"));
    }
    let algorithm = match ell {
        1 => Algorithm::Il1,
        _ => Algorithm::Il2,
    };
    let n = g.node_count();
    let mut blocked = vec![false; n];
    let mut bfs = BoundedBfs::new(n);
    let mut picked = Vec::with_capacity(k);
    for v in ranked_candidates(scores, seeds, usize::MAX) {
        if picked.len() == k {
            break;
        }
        if blocked[v as usize] {
            continue;
        }
        picked.push(v);
        bfs.run(g, &[v], ell, |w, _| blocked[w as usize] = true);
    }
    Ok(RecommendationSet::from_nodes(algorithm, k, picked, scores))
}
