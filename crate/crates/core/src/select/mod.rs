//! One-shot diversifiers that pick `k` vertices from a single ranking.
//!
//! Every selector excludes the seed papers, never repeats a node and breaks
//! score ties by ascending node ID. When fewer than `k` nodes qualify the
//! result is returned short with [`Flag::Partial`] set; it is never padded.

mod divrank;
mod dragon;
mod il;
mod local_max;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::graph::NodeId;
use crate::ranking::SeedSet;

pub use divrank::{divrank, DivRankParams, VisitEstimate};
pub use dragon::dragon_select;
pub use il::il_select;
pub use local_max::{local_maxima, local_maxima_select, rlm_passes, rlm_select};

/// Which algorithm produced a recommendation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Plain top-k of the DaRWR ranking.
    Darwr,
    /// Top-k of undirected personalized PageRank.
    Ppr,
    /// Top-k of undirected global PageRank.
    PageRank,
    Il1,
    Il2,
    Lm,
    /// Relaxed local maxima. `None` means gamma = k.
    Rlm(Option<u32>),
    Dragon,
    PDivRank,
    CDivRank,
    Grasshopper,
    Gsparse,
    Feed,
}

impl Algorithm {
    /// The baseline and the ten diversifiers, in a stable order.
    pub const STANDARD: [Algorithm; 11] = [
        Algorithm::Darwr,
        Algorithm::Il1,
        Algorithm::Il2,
        Algorithm::Lm,
        Algorithm::Rlm(None),
        Algorithm::Dragon,
        Algorithm::PDivRank,
        Algorithm::CDivRank,
        Algorithm::Grasshopper,
        Algorithm::Gsparse,
        Algorithm::Feed,
    ];

    /// Re-ranks the graph once per pick instead of once per query.
    pub fn is_refinement(self) -> bool {
        matches!(self, Algorithm::Grasshopper | Algorithm::Gsparse | Algorithm::Feed)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Algorithm::Darwr => "darwr",
            Algorithm::Ppr => "ppr",
            Algorithm::PageRank => "pagerank",
            Algorithm::Il1 => "il1",
            Algorithm::Il2 => "il2",
            Algorithm::Lm => "lm",
            Algorithm::Rlm(None) => "rlm",
            Algorithm::Rlm(Some(g)) => return write!(f, "rlm{g}"),
            Algorithm::Dragon => "dragon",
            Algorithm::PDivRank => "pdivrank",
            Algorithm::CDivRank => "cdivrank",
            Algorithm::Grasshopper => "grasshopper",
            Algorithm::Gsparse => "gsparse",
            Algorithm::Feed => "feed",
        };
        f.write_str(name)
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "darwr" | "topk" | "top_k" => Algorithm::Darwr,
            "ppr" => Algorithm::Ppr,
            "pagerank" | "pr" => Algorithm::PageRank,
            "il1" => Algorithm::Il1,
            "il2" => Algorithm::Il2,
            "lm" => Algorithm::Lm,
            "rlm" | "k-rlm" | "krlm" => Algorithm::Rlm(None),
            "dragon" => Algorithm::Dragon,
            "pdivrank" => Algorithm::PDivRank,
            "cdivrank" => Algorithm::CDivRank,
            "grasshopper" => Algorithm::Grasshopper,
            "gsparse" => Algorithm::Gsparse,
            "feed" => Algorithm::Feed,
            other => {
                let gamma = other
                    .strip_prefix("rlm")
                    .and_then(|g| g.parse::<u32>().ok())
                    .filter(|&g| g > 0)
                    .ok_or_else(|| format!("unknown algorithm {s:?}"))?;
                Algorithm::Rlm(Some(gamma))
            }
        })
    }
}

/// Conditions worth surfacing next to a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    /// Fewer than `k` nodes were returned.
    Partial,
    /// A ranking run hit its iteration cap.
    NotConverged,
    /// A reweighted prior degenerated and the uniform seed prior was used.
    PriorFallback,
    /// A DivRank row had zero reinforced weight and teleported instead.
    TeleportFallback,
    /// A measure was undefined for this input and reported as 0.
    DegenerateMeasure,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Partial => "partial",
            Flag::NotConverged => "not_converged",
            Flag::PriorFallback => "prior_fallback",
            Flag::TeleportFallback => "teleport_fallback",
            Flag::DegenerateMeasure => "degenerate_measure",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Flags(BTreeSet<Flag>);

impl Flags {
    pub fn set(&mut self, flag: Flag) {
        self.0.insert(flag);
    }

    pub fn contains(&self, flag: Flag) -> bool {
        self.0.contains(&flag)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extend(&mut self, other: &Flags) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn iter(&self) -> impl Iterator<Item = Flag> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, flag) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{flag}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recommendation {
    pub node: NodeId,
    /// The selecting algorithm's own score for this node.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationSet {
    pub algorithm: Algorithm,
    pub requested: usize,
    pub items: Vec<Recommendation>,
    pub flags: Flags,
}

impl RecommendationSet {
    pub(crate) fn new(algorithm: Algorithm, requested: usize) -> Self {
        RecommendationSet { algorithm, requested, items: Vec::with_capacity(requested), flags: Flags::default() }
    }

    pub(crate) fn from_nodes(
        algorithm: Algorithm,
        requested: usize,
        nodes: impl IntoIterator<Item = NodeId>,
        scores: &[f64],
    ) -> Self {
        let mut set = Self::new(algorithm, requested);
        set.items.extend(nodes.into_iter().map(|node| Recommendation { node, score: scores[node as usize] }));
        set.mark_partial();
        set
    }

    pub(crate) fn mark_partial(&mut self) {
        if self.items.len() < self.requested {
            self.flags.set(Flag::Partial);
        }
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.items.iter().map(|r| r.node).collect()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_partial(&self) -> bool {
        self.flags.contains(Flag::Partial)
    }
}

/// Descending score, then ascending node ID.
pub fn score_order(scores: &[f64], a: NodeId, b: NodeId) -> std::cmp::Ordering {
    scores[b as usize].total_cmp(&scores[a as usize]).then(a.cmp(&b))
}

/// The `limit` best non-seed nodes in [`score_order`].
pub fn ranked_candidates(scores: &[f64], seeds: &SeedSet, limit: usize) -> Vec<NodeId> {
    ranked_filtered(scores, limit, |v| !seeds.contains(v))
}

pub(crate) fn ranked_filtered<F>(scores: &[f64], limit: usize, keep: F) -> Vec<NodeId>
where
    F: Fn(NodeId) -> bool,
{
    let mut ids: Vec<NodeId> = (0..scores.len() as NodeId).filter(|&v| keep(v)).collect();
    let cmp = |a: &NodeId, b: &NodeId| score_order(scores, *a, *b);
    if limit < ids.len() {
        if limit == 0 {
            return Vec::new();
        }
        ids.select_nth_unstable_by(limit - 1, cmp);
        ids.truncate(limit);
    }
    ids.sort_unstable_by(cmp);
    ids
}

/// Best eligible node, or `None` if nothing is eligible.
pub(crate) fn best_eligible<F>(scores: &[f64], eligible: F) -> Option<NodeId>
where
    F: Fn(NodeId) -> bool,
{
    (0..scores.len() as NodeId).filter(|&v| eligible(v)).min_by(|&a, &b| score_order(scores, a, b))
}

/// The `k` highest-scored non-seed nodes.
pub fn top_k(scores: &[f64], seeds: &SeedSet, k: usize) -> RecommendationSet {
    top_k_as(Algorithm::Darwr, scores, seeds, k)
}

pub fn top_k_as(algorithm: Algorithm, scores: &[f64], seeds: &SeedSet, k: usize) -> RecommendationSet {
    RecommendationSet::from_nodes(algorithm, k, ranked_candidates(scores, seeds, k), scores)
}
