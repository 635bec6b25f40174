use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::graph::{CitationGraph, NodeId};
use crate::ranking::{RankParams, SeedSet};

use super::{Algorithm, Recommendation, RecommendationSet};

#[derive(Debug, Clone, Copy)]
struct Entry {
    gain: f64,
    node: NodeId,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // max-heap: larger gain first, then smaller node ID
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.total_cmp(&other.gain).then(other.node.cmp(&self.node))
    }
}

/// Greedy maximization of the direction-aware goodness measure.
///
/// The marginal gain of `v` given the current set `S` is
/// `2 pi(v) - d kappa [sum_j A(j,v) pi(j) + A(v,j) pi(v)] - d (1-kappa) [sum_j A(v,j) pi(v) + A(j,v) pi(j)]`
/// over `j` in `S`, with `A` the out-degree normalized adjacency. Gains only
/// ever decrease, so stale heap entries are refreshed lazily; after a pick only
/// its references and citers need an update.
pub fn dragon_select(
    g: &CitationGraph,
    scores: &[f64],
    seeds: &SeedSet,
    k: usize,
    params: &RankParams,
) -> RecommendationSet {
    let n = g.node_count();
    let d = params.damping;
    let kappa = params.kappa;
    let mut gain: Vec<f64> = scores.iter().map(|p| 2.0 * p).collect();
    let mut taken = vec![false; n];
    let mut heap: BinaryHeap<Entry> = (0..n as NodeId)
        .filter(|&v| !seeds.contains(v))
        .map(|node| Entry { gain: gain[node as usize], node })
        .collect();

    let mut set = RecommendationSet::new(Algorithm::Dragon, k);
    while set.items.len() < k {
        let Some(top) = heap.pop() else { break };
        let s = top.node;
        if taken[s as usize] {
            continue;
        }
        if top.gain != gain[s as usize] {
            heap.push(Entry { gain: gain[s as usize], node: s });
            continue;
        }
        taken[s as usize] = true;
        set.items.push(Recommendation { node: s, score: scores[s as usize] });

        let ps = scores[s as usize];
        let refs = g.reference_slice(s);
        if !refs.is_empty() {
            // s cites v: A(s, v) = 1 / outdeg(s)
            let a = 1.0 / refs.len() as f64;
            let cut = d * kappa * a * ps + d * (1.0 - kappa) * a * ps;
            for &v in refs {
                if !taken[v as usize] && !seeds.contains(v) {
                    gain[v as usize] -= cut;
                }
            }
        }
        for &v in g.citer_slice(s) {
            if taken[v as usize] || seeds.contains(v) {
                continue;
            }
            // v cites s: A(v, s) = 1 / outdeg(v)
            let a = 1.0 / g.reference_slice(v).len() as f64;
            let pv = scores[v as usize];
            gain[v as usize] -= d * kappa * a * pv + d * (1.0 - kappa) * a * pv;
        }
    }
    set.mark_partial();
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::goodness;
    use crate::select::top_k;

    fn p3() -> CitationGraph {
        CitationGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap().0
    }

    fn params(d: f64, kappa: f64) -> RankParams {
        RankParams { damping: d, kappa, ..Default::default() }
    }

    #[test]
    fn first_pick_is_argmax() {
        let pi = [0.1, 0.4, 0.2];
        let set = dragon_select(&p3(), &pi, &SeedSet::empty(3), 1, &params(0.9, 0.75));
        assert_eq!(set.nodes(), vec![1]);
    }

    #[test]
    fn incremental_gain_matches_goodness() {
        let g = p3();
        let pi = [0.5, 0.25, 0.125];
        let p = params(0.5, 0.0);
        let set = dragon_select(&g, &pi, &SeedSet::empty(3), 2, &p);
        assert_eq!(set.nodes(), vec![0, 1]);
        assert_eq!(goodness(&[0], &pi, &g, 0.5, 0.0), 1.0);
        assert_eq!(goodness(&[0, 1], &pi, &g, 0.5, 0.0), 1.25);
    }

    #[test]
    fn neighbor_penalty_changes_pick() {
        // 0 and 1 adjacent and both high; 2 is far and a bit lower
        let g = CitationGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap().0;
        let pi = [0.5, 0.45, 0.4, 0.01];
        let set = dragon_select(&g, &pi, &SeedSet::empty(4), 2, &params(0.9, 0.5));
        // gain(1) after 0 = 0.9 - 0.9*0.5 = 0.45 < gain(2) = 0.8
        assert_eq!(set.nodes(), vec![0, 2]);
    }

    #[test]
    fn edgeless_candidates_are_top_k() {
        let g = CitationGraph::from_edges(6, [(1, 0), (2, 0), (3, 0), (4, 5)]).unwrap().0;
        let pi = [0.9, 0.3, 0.2, 0.25, 0.1, 0.05];
        let seeds = SeedSet::new(6, [0]).unwrap();
        let set = dragon_select(&g, &pi, &seeds, 3, &params(0.9, 0.75));
        assert_eq!(set.nodes(), top_k(&pi, &seeds, 3).nodes());
    }

    #[test]
    fn partial_when_out_of_candidates() {
        let pi = [0.5, 0.25, 0.125];
        let seeds = SeedSet::new(3, [0, 1]).unwrap();
        let set = dragon_select(&p3(), &pi, &seeds, 2, &params(0.9, 0.75));
        assert_eq!(set.nodes(), vec![2]);
        assert!(set.is_partial());
    }
}
