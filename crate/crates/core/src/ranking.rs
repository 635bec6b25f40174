//! Power-iteration ranking: PageRank, personalized PageRank and the
//! direction-aware random walk with restart (DaRWR).
//!
//! DaRWR iterates
//!
//! ```text
//! p_{t+1}(v) = (1 - d) p*(v) + sum_u a(u, v) p_t(u)
//! a(u, v) = d (1 - kappa) / outdeg(u)   if u cites v
//!         = d kappa / indeg(u)          if v cites u
//! ```
//!
//! where `p*` is the restart distribution over the seed papers. Rank that
//! follows references drifts towards older papers and rank that follows
//! citations drifts towards newer ones, so `kappa` picks the era of the
//! results. The restart term is scaled by `1 - d` so that scores are
//! comparable across damping factors; this only rescales the fixpoint and
//! never changes an ordering.
//!
//! Transition weights are computed from degrees on the fly. Runs stop when
//! the L2 norm of the change between two iterates falls below `epsilon`.

use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};

/// Parameters shared by every random-walk ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankParams {
    /// Probability of continuing the walk, in `(0, 1]`.
    pub damping: f64,
    /// Share of the walk that follows citations (towards newer papers), in
    /// `[0, 1]`. The rest follows references.
    pub kappa: f64,
    /// L2 threshold on the change between consecutive iterates.
    pub epsilon: f64,
    pub max_iters: usize,
    /// When a node has no references (or no citers), hand the missing
    /// channel's weight to the other channel instead of leaking it.
    pub renormalize_dangling: bool,
}

impl Default for RankParams {
    fn default() -> Self {
        RankParams { damping: 0.9, kappa: 0.75, epsilon: 1e-8, max_iters: 1000, renormalize_dangling: false }
    }
}

impl RankParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::param(format!("damping {} not in (0, 1]", self.damping)));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(Error::param(format!("kappa {} not in [0, 1]", self.kappa)));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::param(format!("epsilon {} must be positive", self.epsilon)));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be positive"));
        }
        Ok(())
    }
}

/// Scores of one ranking run.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// L2 norm of the last update.
    pub residual: f64,
    /// L2 norm of every update, in order.
    pub residual_history: Vec<f64>,
}

/// The query's seed papers. Kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    ids: Vec<NodeId>,
    mask: Vec<bool>,
}

impl SeedSet {
    pub fn new(n: usize, ids: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut mask = vec![false; n];
        let mut sorted = Vec::new();
        for id in ids {
            let slot = mask.get_mut(id as usize).ok_or(Error::NodeOutOfRange { id: id.into(), n })?;
            if !*slot {
                *slot = true;
                sorted.push(id);
            }
        }
        sorted.sort_unstable();
        Ok(SeedSet { ids: sorted, mask })
    }

    pub fn empty(n: usize) -> Self {
        SeedSet { ids: Vec::new(), mask: vec![false; n] }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.mask[v as usize]
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.mask.len()
    }

    /// Uniform restart distribution over the seeds.
    pub fn uniform_prior(&self) -> Vec<(NodeId, f64)> {
        let w = 1.0 / self.ids.len() as f64;
        self.ids.iter().map(|&id| (id, w)).collect()
    }
}

fn dense_prior(n: usize, prior: &[(NodeId, f64)]) -> Result<Vec<f64>> {
    if prior.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let mut dense = vec![0.0; n];
    for &(v, w) in prior {
        if v as usize >= n {
            return Err(Error::NodeOutOfRange { id: v.into(), n });
        }
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::param(format!("prior weight {w} for node {v}")));
        }
        dense[v as usize] += w;
    }
    Ok(dense)
}

fn l2_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// One DaRWR operator bound to a topology and a restart vector.
pub(crate) struct DarwrOperator<'a, T: Topology> {
    topo: &'a T,
    prior: Vec<f64>,
    restart: Vec<f64>,
    ref_weight: Vec<f64>,
    cite_weight: Vec<f64>,
    ref_share: Vec<f64>,
    cite_share: Vec<f64>,
}

impl<'a, T: Topology> DarwrOperator<'a, T> {
    pub(crate) fn new(topo: &'a T, prior: &[(NodeId, f64)], params: &RankParams) -> Result<Self> {
        params.validate()?;
        let n = topo.node_count();
        let d = params.damping;
        let prior = dense_prior(n, prior)?;
        let restart = prior.iter().map(|p| (1.0 - d) * p).collect();
        let mut ref_weight = vec![0.0; n];
        let mut cite_weight = vec![0.0; n];
        for u in 0..n as NodeId {
            if topo.is_sink(u) {
                continue;
            }
            let out = topo.out_degree(u);
            let inc = topo.in_degree(u);
            let (mut ref_mass, mut cite_mass) = (d * (1.0 - params.kappa), d * params.kappa);
            if params.renormalize_dangling {
                if out == 0 && inc > 0 {
                    cite_mass = d;
                } else if inc == 0 && out > 0 {
                    ref_mass = d;
                }
            }
            if out > 0 {
                ref_weight[u as usize] = ref_mass / out as f64;
            }
            if inc > 0 {
                cite_weight[u as usize] = cite_mass / inc as f64;
            }
        }
        Ok(DarwrOperator {
            topo,
            prior,
            restart,
            ref_weight,
            cite_weight,
            ref_share: vec![0.0; n],
            cite_share: vec![0.0; n],
        })
    }

    pub(crate) fn initial(&self) -> Vec<f64> {
        self.prior.clone()
    }

    /// Applies one step and returns the L2 norm of `next - cur`.
    pub(crate) fn step(&mut self, cur: &[f64], next: &mut [f64]) -> f64 {
        for (u, &p) in cur.iter().enumerate() {
            self.ref_share[u] = p * self.ref_weight[u];
            self.cite_share[u] = p * self.cite_weight[u];
        }
        for (v, slot) in next.iter_mut().enumerate() {
            let v = v as NodeId;
            // rank reaching v along "u cites v" uses u's reference channel
            let via_refs: f64 = self.topo.citers(v).map(|u| self.ref_share[u as usize]).sum();
            let via_cites: f64 = self.topo.references(v).map(|u| self.cite_share[u as usize]).sum();
            *slot = self.restart[v as usize] + (via_refs + via_cites);
        }
        l2_diff(cur, next)
    }
}

fn iterate<F>(mut cur: Vec<f64>, params: &RankParams, mut step: F) -> RankVector
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let mut next = vec![0.0; cur.len()];
    let mut history = Vec::new();
    let mut converged = false;
    for _ in 0..params.max_iters {
        let residual = step(&cur, &mut next);
        history.push(residual);
        std::mem::swap(&mut cur, &mut next);
        if residual < params.epsilon {
            converged = true;
            break;
        }
    }
    RankVector {
        scores: cur,
        iterations: history.len(),
        converged,
        residual: history.last().copied().unwrap_or(0.0),
        residual_history: history,
    }
}

/// Direction-aware random walk with restart to the seed set.
pub fn darwr<T: Topology>(g: &T, seeds: &SeedSet, params: &RankParams) -> Result<RankVector> {
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    darwr_with_prior(g, &seeds.uniform_prior(), params)
}

/// DaRWR with an arbitrary (sparse) restart distribution.
pub fn darwr_with_prior<T: Topology>(g: &T, prior: &[(NodeId, f64)], params: &RankParams) -> Result<RankVector> {
    darwr_from(g, prior, params, None)
}

/// DaRWR started from `init` instead of the prior. Useful for warm starts.
pub fn darwr_from<T: Topology>(
    g: &T,
    prior: &[(NodeId, f64)],
    params: &RankParams,
    init: Option<&[f64]>,
) -> Result<RankVector> {
    let mut op = DarwrOperator::new(g, prior, params)?;
    let start = match init {
        Some(v) if v.len() == g.node_count() => v.to_vec(),
        Some(v) => {
            return Err(Error::param(format!("initial vector has {} entries, graph has {}", v.len(), g.node_count())))
        }
        None => op.initial(),
    };
    if log::log_enabled!(log::Level::Trace) {
        log::trace!("darwr: n={} prior={}", g.node_count(), prior.len());
    }
    let out = iterate(start, params, |cur, next| op.step(cur, next));
    if !out.converged {
        log::warn!("darwr did not converge in {} iterations (residual {:e})", out.iterations, out.residual);
    }
    Ok(out)
}

/// Runs exactly `horizon` DaRWR steps from the prior and returns the sum of
/// the iterates `p_1 + ... + p_horizon` together with the last iterate.
pub fn darwr_cumulative<T: Topology>(
    g: &T,
    prior: &[(NodeId, f64)],
    params: &RankParams,
    horizon: usize,
) -> Result<(Vec<f64>, RankVector)> {
    let mut op = DarwrOperator::new(g, prior, params)?;
    let n = g.node_count();
    let mut cur = op.initial();
    let mut next = vec![0.0; n];
    let mut total = vec![0.0; n];
    let mut history = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let residual = op.step(&cur, &mut next);
        history.push(residual);
        for (t, x) in total.iter_mut().zip(&next) {
            *t += x;
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let residual = history.last().copied().unwrap_or(0.0);
    let last = RankVector {
        scores: cur,
        iterations: horizon,
        converged: residual < params.epsilon,
        residual,
        residual_history: history,
    };
    Ok((total, last))
}

fn undirected_walk<T: Topology>(g: &T, prior: Vec<f64>, params: &RankParams) -> RankVector {
    let n = g.node_count();
    let d = params.damping;
    let restart: Vec<f64> = prior.iter().map(|p| (1.0 - d) * p).collect();
    let inv_degree: Vec<f64> = (0..n as NodeId)
        .map(|u| match g.degree(u) {
            0 => 0.0,
            deg => d / deg as f64,
        })
        .collect();
    let mut share = vec![0.0; n];
    iterate(prior, params, |cur, next| {
        for (s, (p, w)) in share.iter_mut().zip(cur.iter().zip(&inv_degree)) {
            *s = p * w;
        }
        for (v, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g.undirected_neighbors(v as NodeId).map(|u| share[u as usize]).sum();
            *slot = restart[v] + inflow;
        }
        l2_diff(cur, next)
    })
}

/// Classic PageRank on the undirected view with uniform teleportation.
/// `kappa` is ignored.
pub fn pagerank<T: Topology>(g: &T, params: &RankParams) -> Result<RankVector> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::param("graph has no nodes"));
    }
    Ok(undirected_walk(g, vec![1.0 / n as f64; n], params))
}

/// Personalized PageRank on the undirected view, teleporting to the seeds.
/// `kappa` is ignored.
pub fn ppr<T: Topology>(g: &T, seeds: &SeedSet, params: &RankParams) -> Result<RankVector> {
    params.validate()?;
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    let prior = dense_prior(g.node_count(), &seeds.uniform_prior())?;
    Ok(undirected_walk(g, prior, params))
}
