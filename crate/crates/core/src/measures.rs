//! Relevance and diversity measures of a recommendation set.
//!
//! Relevance is judged against the baseline DaRWR ranking of the query.
//! All distances are undirected hop counts; an unreachable pair counts as
//! `n`. Measures that are undefined for an input (an empty set, a single
//! node for pairwise measures, an all-zero ranking) return `None`, which
//! [`evaluate`] reports as 0 with [`Flag::DegenerateMeasure`].

use crate::graph::{multi_source_distances, BoundedBfs, CitationGraph, NodeId, Topology};
use crate::ranking::{RankParams, SeedSet};
use crate::select::{ranked_candidates, Flag, Flags, RecommendationSet};

/// How usefulness compares a node's score against the score at rank `10k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UsefulnessRule {
    /// Count nodes scored at least as high as rank `10k`, i.e. the nodes
    /// within the top `10k`.
    #[default]
    WithinTop,
    /// Count nodes scored at most as high as rank `10k`.
    AtMostThreshold,
}

/// Sum of the set's scores over the sum of the `k` best non-seed scores.
pub fn rel(set: &[NodeId], scores: &[f64], seeds: &SeedSet, k: usize) -> Option<f64> {
    let num: f64 = set.iter().map(|&v| scores[v as usize]).sum();
    let den: f64 = ranked_candidates(scores, seeds, k).iter().map(|&v| scores[v as usize]).sum();
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

/// Share of the set that is not in `reference`.
pub fn diff(set: &[NodeId], reference: &[NodeId]) -> Option<f64> {
    if set.is_empty() {
        return None;
    }
    let shared = set.iter().filter(|v| reference.contains(v)).count();
    Some(1.0 - shared as f64 / set.len() as f64)
}

/// Share of the set that lies within the top `10k` non-seed nodes. When
/// there are no more than `10k` non-seeds every node qualifies.
pub fn usefulness(set: &[NodeId], scores: &[f64], seeds: &SeedSet, k: usize, rule: UsefulnessRule) -> Option<f64> {
    if set.is_empty() {
        return None;
    }
    let depth = k.saturating_mul(10);
    if depth == 0 {
        return None;
    }
    let ranked = ranked_candidates(scores, seeds, depth);
    if ranked.len() < depth {
        return Some(1.0);
    }
    let threshold = scores[ranked[depth - 1] as usize];
    let hits = set
        .iter()
        .filter(|&&v| match rule {
            UsefulnessRule::WithinTop => scores[v as usize] >= threshold,
            UsefulnessRule::AtMostThreshold => scores[v as usize] <= threshold,
        })
        .count();
    Some(hits as f64 / set.len() as f64)
}

/// Direction-aware goodness of a set:
///
/// ```text
/// 2 sum_i pi(i) - d kappa sum_{i,j} A(j,i) pi(j) - d (1-kappa) sum_{i,j} A(i,j) pi(i)
/// ```
///
/// with `i, j` ranging over the set and `A` the out-degree normalized
/// adjacency matrix.
pub fn goodness(set: &[NodeId], scores: &[f64], g: &CitationGraph, d: f64, kappa: f64) -> f64 {
    let mut member = std::collections::HashSet::with_capacity(set.len());
    member.extend(set.iter().copied());
    let mut along_refs = 0.0;
    let mut along_cites = 0.0;
    for &i in set {
        let refs = g.reference_slice(i);
        let a = 1.0 / refs.len().max(1) as f64;
        let inside = refs.iter().filter(|v| member.contains(v)).count() as f64;
        // every edge i -> j inside the set adds A(i,j) pi(i) to both sums
        along_cites += inside * a * scores[i as usize];
        along_refs += inside * a * scores[i as usize];
    }
    let total: f64 = set.iter().map(|&v| scores[v as usize]).sum();
    2.0 * total - d * kappa * along_cites - d * (1.0 - kappa) * along_refs
}

/// Hop distances from every member of `set` to every node.
fn distance_rows<T: Topology>(g: &T, set: &[NodeId]) -> Vec<Vec<u32>> {
    set.iter().map(|&s| multi_source_distances(g, &[s]).expect("node ids are in range")).collect()
}

/// Share of ordered pairs in the set within `ell` hops of each other.
pub fn density<T: Topology>(g: &T, set: &[NodeId], ell: u32) -> Option<f64> {
    density_from_rows(&distance_rows(g, set), set, ell)
}

fn density_from_rows(rows: &[Vec<u32>], set: &[NodeId], ell: u32) -> Option<f64> {
    if set.len() < 2 {
        return None;
    }
    let mut close = 0usize;
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in set.iter().enumerate() {
            if i != j && row[v as usize] <= ell {
                close += 1;
            }
        }
    }
    Some(close as f64 / (set.len() * (set.len() - 1)) as f64)
}

/// Share of all nodes within `ell` hops of the set (the set included).
pub fn expansion_ratio<T: Topology>(g: &T, set: &[NodeId], ell: u32) -> f64 {
    let n = g.node_count();
    if n == 0 {
        return 0.0;
    }
    let mut count = 0usize;
    BoundedBfs::new(n).run(g, set, ell, |_, _| count += 1);
    count as f64 / n as f64
}

/// Mean hop distance over ordered pairs of distinct members.
pub fn avg_pairwise_distance<T: Topology>(g: &T, set: &[NodeId]) -> Option<f64> {
    pairwise_from_rows(&distance_rows(g, set), set)
}

fn pairwise_from_rows(rows: &[Vec<u32>], set: &[NodeId]) -> Option<f64> {
    if set.len() < 2 {
        return None;
    }
    let mut total = 0u64;
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in set.iter().enumerate() {
            if i != j {
                total += u64::from(row[v as usize]);
            }
        }
    }
    Some(total as f64 / (set.len() * (set.len() - 1)) as f64)
}

/// Mean over the set of the hop distance to the closest seed, given the
/// multi-source distances from the seeds.
pub fn avg_min_distance(set: &[NodeId], seed_distances: &[u32]) -> Option<f64> {
    if set.is_empty() {
        return None;
    }
    let total: u64 = set.iter().map(|&v| u64::from(seed_distances[v as usize])).sum();
    Some(total as f64 / set.len() as f64)
}

/// Mean publication year over the members with a known year.
pub fn avg_year(g: &CitationGraph, set: &[NodeId]) -> Option<f64> {
    let years: Vec<i32> = set.iter().filter_map(|&v| g.year(v)).collect();
    if years.is_empty() {
        return None;
    }
    Some(years.iter().map(|&y| f64::from(y)).sum::<f64>() / years.len() as f64)
}

/// Every measure of one recommendation set.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub rel: f64,
    pub diff: f64,
    pub usefulness: f64,
    pub goodness: f64,
    /// `(ell, density)` per requested depth.
    pub density: Vec<(u32, f64)>,
    /// `(ell, expansion ratio)` per requested depth.
    pub expansion: Vec<(u32, f64)>,
    pub avg_year: Option<f64>,
    pub avg_pairwise_dist: f64,
    pub avg_min_dist_to_seeds: f64,
    pub runtime_ms: f64,
    pub flags: Flags,
}

impl MetricsReport {
    pub fn density_at(&self, ell: u32) -> Option<f64> {
        self.density.iter().find(|(l, _)| *l == ell).map(|(_, x)| *x)
    }

    pub fn expansion_at(&self, ell: u32) -> Option<f64> {
        self.expansion.iter().find(|(l, _)| *l == ell).map(|(_, x)| *x)
    }
}

/// Per-query inputs shared by every set that gets scored for the query.
#[derive(Debug, Clone)]
pub struct QueryContext<'a> {
    pub graph: &'a CitationGraph,
    pub seeds: &'a SeedSet,
    /// Baseline DaRWR scores of the query.
    pub baseline: &'a [f64],
    pub params: RankParams,
    pub ells: Vec<u32>,
    pub rule: UsefulnessRule,
    seed_distances: Vec<u32>,
}

impl<'a> QueryContext<'a> {
    pub fn new(
        graph: &'a CitationGraph,
        seeds: &'a SeedSet,
        baseline: &'a [f64],
        params: RankParams,
        ells: Vec<u32>,
        rule: UsefulnessRule,
    ) -> Self {
        let seed_distances = multi_source_distances(graph, seeds.ids()).expect("seed ids are in range");
        QueryContext { graph, seeds, baseline, params, ells, rule, seed_distances }
    }

    pub fn seed_distances(&self) -> &[u32] {
        &self.seed_distances
    }
}

/// Scores `set`, which was requested with size `k`. The selector's own
/// flags are carried over.
pub fn evaluate(ctx: &QueryContext<'_>, set: &RecommendationSet, k: usize) -> MetricsReport {
    let nodes = set.nodes();
    let mut flags = set.flags.clone();
    let mut or_zero = |x: Option<f64>| {
        x.unwrap_or_else(|| {
            flags.set(Flag::DegenerateMeasure);
            0.0
        })
    };
    let scores = ctx.baseline;
    let reference = ranked_candidates(scores, ctx.seeds, k);
    let rel = or_zero(rel(&nodes, scores, ctx.seeds, k));
    let diff = or_zero(diff(&nodes, &reference));
    let usefulness = or_zero(usefulness(&nodes, scores, ctx.seeds, k, ctx.rule));
    let rows = distance_rows(ctx.graph, &nodes);
    let density: Vec<(u32, f64)> =
        ctx.ells.iter().map(|&l| (l, or_zero(density_from_rows(&rows, &nodes, l)))).collect();
    let avg_pairwise_dist = or_zero(pairwise_from_rows(&rows, &nodes));
    let avg_min_dist_to_seeds = or_zero(avg_min_distance(&nodes, &ctx.seed_distances));
    let goodness = goodness(&nodes, scores, ctx.graph, ctx.params.damping, ctx.params.kappa);
    let expansion = ctx.ells.iter().map(|&l| (l, expansion_ratio(ctx.graph, &nodes, l))).collect();
    MetricsReport {
        rel,
        diff,
        usefulness,
        goodness,
        density,
        expansion,
        avg_year: avg_year(ctx.graph, &nodes),
        avg_pairwise_dist,
        avg_min_dist_to_seeds,
        runtime_ms: 0.0,
        flags,
    }
}
