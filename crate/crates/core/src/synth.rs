//! Synthetic year-layered citation graphs and neighborhood queries.
//!
//! Nodes are split into equal layers, one publication year per layer. Each
//! node outside the oldest layer cites a Poisson number of distinct nodes
//! from strictly older layers, picked with probability proportional to
//! `1 + citations received so far`. The rich-get-richer draw gives the
//! heavy-tailed citation counts of real corpora.
//!
//! Every node also belongs to a topic, and most references are drawn from
//! the citing node's own topic. Without that locality nearly every pair of
//! papers is two hops apart through some hub, and no selection can be more
//! spread out than another.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};

use crate::error::{Error, Result};
use crate::graph::{BoundedBfs, CitationGraph, NodeId};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub nodes: usize,
    pub layers: usize,
    /// Target mean number of references per node over the whole graph.
    pub avg_out_degree: f64,
    pub seed: u64,
    /// Year of the oldest layer.
    pub first_year: i32,
    /// Number of research topics. Each node gets one at random.
    pub topics: usize,
    /// Probability that a reference is drawn from the citing node's own
    /// topic rather than from the whole older corpus.
    pub topic_affinity: f64,
}

impl SynthConfig {
    /// One topic per 200 nodes, 90% of references inside the topic.
    pub fn new(nodes: usize, layers: usize, avg_out_degree: f64, seed: u64) -> Self {
        SynthConfig {
            nodes,
            layers,
            avg_out_degree,
            seed,
            first_year: 1990,
            topics: (nodes / 200).max(1),
            topic_affinity: 0.9,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.layers < 2 || self.nodes < self.layers {
            return Err(Error::param(format!(
                "need nodes >= layers >= 2, got {} nodes and {} layers",
                self.nodes, self.layers
            )));
        }
        if !(self.avg_out_degree >= 1.0 && self.avg_out_degree.is_finite()) {
            return Err(Error::param(format!("average out-degree {} must be at least 1", self.avg_out_degree)));
        }
        if self.topics == 0 || !(0.0..=1.0).contains(&self.topic_affinity) {
            return Err(Error::param("need at least one topic and an affinity in [0, 1]"));
        }
        if self.nodes > NodeId::MAX as usize {
            return Err(Error::TooManyNodes(self.nodes));
        }
        Ok(())
    }

    /// First node of every layer, plus `nodes` at the end.
    fn layer_bounds(&self) -> Vec<usize> {
        (0..=self.layers).map(|l| l * self.nodes / self.layers).collect()
    }
}

/// Builds the graph. The same config always gives the same graph.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<CitationGraph> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bounds = cfg.layer_bounds();
    let n = cfg.nodes;
    // the oldest layer cites nothing, so the others make up for it
    let citing = (n - bounds[1]) as f64;
    let lambda = (cfg.avg_out_degree * n as f64 / citing - 1.0).max(0.0);
    let extra = Poisson::new(lambda.max(1e-9)).expect("positive rate");

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity((cfg.avg_out_degree * n as f64) as usize + n);
    // one ticket per older node plus one per citation it received, in the
    // global urn and in the node's topic urn
    let topic: Vec<usize> = (0..n).map(|_| rng.gen_range(0..cfg.topics)).collect();
    let mut urn: Vec<NodeId> = Vec::new();
    let mut topic_urns: Vec<Vec<NodeId>> = vec![Vec::new(); cfg.topics];
    let admit = |urn: &mut Vec<NodeId>, topic_urns: &mut Vec<Vec<NodeId>>, v: NodeId| {
        urn.push(v);
        topic_urns[topic[v as usize]].push(v);
    };
    for v in 0..bounds[1] as NodeId {
        admit(&mut urn, &mut topic_urns, v);
    }
    let mut cited = vec![false; n];
    let mut targets: Vec<NodeId> = Vec::new();
    for layer in 1..cfg.layers {
        let older = bounds[layer];
        let mut received = Vec::new();
        for u in bounds[layer]..bounds[layer + 1] {
            let want = (1 + extra.sample(&mut rng) as usize).min(older);
            targets.clear();
            let mut attempts = 0;
            while targets.len() < want && attempts < 20 * want {
                attempts += 1;
                let own = &topic_urns[topic[u]];
                let pool = if !own.is_empty() && rng.gen_bool(cfg.topic_affinity) { own } else { &urn };
                let v = pool[rng.gen_range(0..pool.len())];
                if !targets.contains(&v) {
                    targets.push(v);
                }
            }
            for &v in &targets {
                edges.push((u as NodeId, v));
                cited[v as usize] = true;
                received.push(v);
            }
        }
        for v in received.into_iter().chain(bounds[layer] as NodeId..bounds[layer + 1] as NodeId) {
            admit(&mut urn, &mut topic_urns, v);
        }
    }
    // oldest-layer papers nobody cited get one citer from the next layer,
    // from the same topic when there is one
    let mut next_layer: Vec<Vec<usize>> = vec![Vec::new(); cfg.topics];
    for u in bounds[1]..bounds[2] {
        next_layer[topic[u]].push(u);
    }
    for v in 0..bounds[1] {
        if !cited[v] {
            let u = match next_layer[topic[v]].as_slice() {
                [] => rng.gen_range(bounds[1]..bounds[2]),
                same => *same.choose(&mut rng).expect("nonempty"),
            };
            edges.push((u as NodeId, v as NodeId));
        }
    }
    let (mut g, _) = CitationGraph::from_edges(n, edges)?;
    for layer in 0..cfg.layers {
        for u in bounds[layer]..bounds[layer + 1] {
            g.set_year(u as NodeId, Some(cfg.first_year + layer as i32));
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryConfig {
    pub count: usize,
    /// Mean seed-set size; sizes are exponential around it, clipped to
    /// `[1, max_seeds]`.
    pub mean_seeds: f64,
    pub max_seeds: usize,
    /// Seeds are drawn within this many undirected hops of a center node.
    pub radius: u32,
    /// Inclusive year range the center node is drawn from.
    pub center_years: Option<(i32, i32)>,
    pub seed: u64,
}

impl Default for QueryConfig {
    fn default() -> Self {
        QueryConfig { count: 50, mean_seeds: 24.35, max_seeds: 130, radius: 2, center_years: None, seed: 7 }
    }
}

/// Seed sets drawn from one neighborhood each. Every set is sorted and
/// non-empty.
pub fn synthetic_queries(g: &CitationGraph, cfg: &QueryConfig) -> Result<Vec<Vec<NodeId>>> {
    if cfg.max_seeds == 0 || cfg.mean_seeds.is_nan() || cfg.mean_seeds < 1.0 {
        return Err(Error::param("query sizes must allow at least one seed"));
    }
    let centers: Vec<NodeId> = (0..g.node_count() as NodeId)
        .filter(|&v| match (cfg.center_years, g.year(v)) {
            (None, _) => true,
            (Some((lo, hi)), Some(y)) => (lo..=hi).contains(&y),
            (Some(_), None) => false,
        })
        .collect();
    if centers.is_empty() {
        return Err(Error::param("no node falls in the requested center years"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sizes = Exp::new(1.0 / (cfg.mean_seeds - 1.0).max(1e-9)).expect("positive rate");
    let mut bfs = BoundedBfs::new(g.node_count());
    let mut queries = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let center = *centers.choose(&mut rng).expect("nonempty");
        let mut hood = Vec::new();
        bfs.run(g, &[center], cfg.radius, |v, _| hood.push(v));
        let size = (1 + sizes.sample(&mut rng).round() as usize).min(cfg.max_seeds).min(hood.len());
        let mut seeds: Vec<NodeId> = hood.choose_multiple(&mut rng, size).copied().collect();
        seeds.sort_unstable();
        queries.push(seeds);
    }
    Ok(queries)
}
