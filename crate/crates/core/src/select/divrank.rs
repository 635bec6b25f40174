//! Direction-aware DivRank: a vertex-reinforced random walk.
//!
//! The organic transition weights are
//!
//! ```text
//! seed u:      self 0,        reference (1-kappa)/outdeg(u),   citer kappa/indeg(u)
//! non-seed u:  self 1-alpha,  reference alpha(1-kappa)/outdeg, citer alpha kappa/indeg
//! ```
//!
//! and at iteration `t` the walk moves from `u` to `v` with probability
//! `(1-d) p*(v) + d w(u,v) eta_t(v) / sum_z w(u,z) eta_t(z)`, where `eta_t`
//! estimates how often each node has been visited. Heavily visited nodes
//! pull more rank, so mass concentrates on a few representatives.
//!
//! Seeds lose their self link so their restart mass flows outward. Every
//! node starts at `1/n`; a zero start would leave the reinforcement with
//! nothing to weight.

use crate::error::{Error, Result};
use crate::graph::{CitationGraph, NodeId};
use crate::ranking::{RankParams, RankVector, SeedSet};

use super::{ranked_candidates, Algorithm, Flag, RecommendationSet};

/// How the visit counts `eta_t` are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VisitEstimate {
    /// `eta_t = p_t`.
    Pointwise,
    /// `eta_t = p_0 + ... + p_t`.
    Cumulative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivRankParams {
    /// Weight of the organic links to neighbors, in `(0, 1)`.
    pub alpha: f64,
    pub estimate: VisitEstimate,
}

impl Default for DivRankParams {
    fn default() -> Self {
        DivRankParams { alpha: 0.25, estimate: VisitEstimate::Cumulative }
    }
}

/// Runs the reinforced walk to convergence and returns the top `k`
/// non-seed nodes by final score, along with the final vector.
pub fn divrank(
    g: &CitationGraph,
    seeds: &SeedSet,
    params: &RankParams,
    div: &DivRankParams,
    k: usize,
) -> Result<(RecommendationSet, RankVector)> {
    params.validate()?;
    if seeds.is_empty() {
        return Err(Error::EmptySeedSet);
    }
    if !(div.alpha > 0.0 && div.alpha < 1.0) {
        return Err(Error::param(format!("alpha {} not in (0, 1)", div.alpha)));
    }
    let n = g.node_count();
    let d = params.damping;
    let kappa = params.kappa;
    let prior_weight = 1.0 / seeds.len() as f64;

    let mut self_w = vec![0.0; n];
    let mut ref_w = vec![0.0; n];
    let mut cite_w = vec![0.0; n];
    for u in 0..n as NodeId {
        let ui = u as usize;
        let a = if seeds.contains(u) { 1.0 } else { div.alpha };
        if !seeds.contains(u) {
            self_w[ui] = 1.0 - div.alpha;
        }
        let out = g.reference_slice(u).len();
        let inc = g.citer_slice(u).len();
        if out > 0 {
            ref_w[ui] = a * (1.0 - kappa) / out as f64;
        }
        if inc > 0 {
            cite_w[ui] = a * kappa / inc as f64;
        }
    }

    let mut cur = vec![1.0 / n as f64; n];
    let mut eta = cur.clone();
    let mut next = vec![0.0; n];
    let mut scale = vec![0.0; n];
    let mut history = Vec::new();
    let mut converged = false;
    let mut teleported = false;

    for _ in 0..params.max_iters {
        // per-row normalizer of the reinforced organic weights
        let mut stranded = 0.0;
        for u in 0..n as NodeId {
            let ui = u as usize;
            let refs: f64 = g.reference_slice(u).iter().map(|&v| eta[v as usize]).sum();
            let cites: f64 = g.citer_slice(u).iter().map(|&v| eta[v as usize]).sum();
            let denom = self_w[ui] * eta[ui] + (ref_w[ui] * refs + cite_w[ui] * cites);
            if denom > 0.0 {
                scale[ui] = d * cur[ui] / denom;
            } else {
                scale[ui] = 0.0;
                stranded += cur[ui];
                if cur[ui] > 0.0 {
                    teleported = true;
                }
            }
        }
        let mass: f64 = cur.iter().sum();
        let restart = prior_weight * ((1.0 - d) * mass + d * stranded);
        for v in 0..n as NodeId {
            let vi = v as usize;
            let via_refs: f64 = g.citer_slice(v).iter().map(|&u| scale[u as usize] * ref_w[u as usize]).sum();
            let via_cites: f64 = g.reference_slice(v).iter().map(|&u| scale[u as usize] * cite_w[u as usize]).sum();
            let organic = scale[vi] * self_w[vi] + (via_refs + via_cites);
            next[vi] = eta[vi] * organic;
        }
        for &s in seeds.ids() {
            next[s as usize] += restart;
        }
        let residual = cur.iter().zip(&next).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        history.push(residual);
        std::mem::swap(&mut cur, &mut next);
        match div.estimate {
            VisitEstimate::Pointwise => eta.copy_from_slice(&cur),
            VisitEstimate::Cumulative => {
                for (e, p) in eta.iter_mut().zip(&cur) {
                    *e += p;
                }
            }
        }
        if residual < params.epsilon {
            converged = true;
            break;
        }
    }

    let ranking = RankVector {
        iterations: history.len(),
        converged,
        residual: history.last().copied().unwrap_or(0.0),
        residual_history: history,
        scores: cur,
    };
    let algorithm = match div.estimate {
        VisitEstimate::Pointwise => Algorithm::PDivRank,
        VisitEstimate::Cumulative => Algorithm::CDivRank,
    };
    let picks = ranked_candidates(&ranking.scores, seeds, k);
    let mut set = RecommendationSet::from_nodes(algorithm, k, picks, &ranking.scores);
    if !ranking.converged {
        set.flags.set(Flag::NotConverged);
    }
    if teleported {
        set.flags.set(Flag::TeleportFallback);
    }
    Ok((set, ranking))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p3() -> CitationGraph {
        CitationGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap().0
    }

    /// Straightforward reinforced walk: rebuilds the dense transition matrix
    /// every iteration. Returns the final vector and the visit estimates.
    #[allow(clippy::needless_range_loop)]
    fn dense_vrrw(
        g: &CitationGraph,
        seeds: &[NodeId],
        d: f64,
        kappa: f64,
        alpha: f64,
        estimate: VisitEstimate,
        iters: usize,
    ) -> (Vec<f64>, Vec<Vec<f64>>) {
        let n = g.node_count();
        let mut w = vec![vec![0.0; n]; n];
        for u in 0..n {
            let seed = seeds.contains(&(u as NodeId));
            let a = if seed { 1.0 } else { alpha };
            if !seed {
                w[u][u] += 1.0 - alpha;
            }
            let refs = g.reference_slice(u as NodeId);
            let cites = g.citer_slice(u as NodeId);
            for &v in refs {
                w[u][v as usize] += a * (1.0 - kappa) / refs.len() as f64;
            }
            for &v in cites {
                w[u][v as usize] += a * kappa / cites.len() as f64;
            }
        }
        let mut prior = vec![0.0; n];
        for &s in seeds {
            prior[s as usize] = 1.0 / seeds.len() as f64;
        }
        let mut p = vec![1.0 / n as f64; n];
        let mut eta = p.clone();
        let mut etas = vec![eta.clone()];
        for _ in 0..iters {
            let mut next = vec![0.0; n];
            for u in 0..n {
                let denom: f64 = (0..n).map(|z| w[u][z] * eta[z]).sum();
                for v in 0..n {
                    let t = if denom > 0.0 { (1.0 - d) * prior[v] + d * w[u][v] * eta[v] / denom } else { prior[v] };
                    next[v] += t * p[u];
                }
            }
            p = next;
            match estimate {
                VisitEstimate::Pointwise => eta = p.clone(),
                VisitEstimate::Cumulative => eta.iter_mut().zip(&p).for_each(|(e, x)| *e += x),
            }
            etas.push(eta.clone());
        }
        (p, etas)
    }

    #[test]
    fn matches_dense_oracle_on_path() {
        let g = p3();
        let seeds = SeedSet::new(3, [0]).unwrap();
        let params = RankParams { damping: 0.5, kappa: 0.5, epsilon: 1e-12, max_iters: 2000, ..Default::default() };
        for estimate in [VisitEstimate::Pointwise, VisitEstimate::Cumulative] {
            let div = DivRankParams { alpha: 0.25, estimate };
            let (set, rv) = divrank(&g, &seeds, &params, &div, 2).unwrap();
            let (oracle, etas) = dense_vrrw(&g, &[0], 0.5, 0.5, 0.25, estimate, rv.iterations);
            for (a, b) in rv.scores.iter().zip(&oracle) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
            let mut expected: Vec<NodeId> = vec![1, 2];
            expected.sort_by(|&a, &b| oracle[b as usize].total_cmp(&oracle[a as usize]).then(a.cmp(&b)));
            assert_eq!(set.nodes(), expected);
            // the cumulative estimate changes by O(1/t) per step and hits the cap
            assert_eq!(rv.converged, estimate == VisitEstimate::Pointwise);
            assert_eq!(set.flags.contains(Flag::NotConverged), !rv.converged);
            if estimate == VisitEstimate::Cumulative {
                for pair in etas.windows(2) {
                    assert!(pair[0].iter().zip(&pair[1]).all(|(a, b)| a <= b));
                }
            }
        }
    }

    #[test]
    fn matches_dense_oracle_on_small_graph() {
        let g = CitationGraph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 2), (4, 3), (5, 3), (5, 1)]).unwrap().0;
        let seeds = SeedSet::new(6, [3, 5]).unwrap();
        let params = RankParams { damping: 0.9, kappa: 0.75, max_iters: 40, ..Default::default() };
        for estimate in [VisitEstimate::Pointwise, VisitEstimate::Cumulative] {
            let div = DivRankParams { alpha: 0.25, estimate };
            let (_, rv) = divrank(&g, &seeds, &params, &div, 3).unwrap();
            let (oracle, _) = dense_vrrw(&g, &[3, 5], 0.9, 0.75, 0.25, estimate, rv.iterations);
            for (a, b) in rv.scores.iter().zip(&oracle) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn defaults() {
        let p = DivRankParams::default();
        assert_eq!(p.alpha, 0.25);
    }

    #[test]
    fn conserves_mass() {
        let g = CitationGraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap().0;
        let seeds = SeedSet::new(5, [0]).unwrap();
        for estimate in [VisitEstimate::Pointwise, VisitEstimate::Cumulative] {
            let div = DivRankParams { estimate, ..Default::default() };
            let (_, rv) = divrank(&g, &seeds, &RankParams::default(), &div, 2).unwrap();
            assert_abs_diff_eq!(rv.scores.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn teleports_from_empty_rows() {
        // seed 0 only has a reference channel, which kappa = 1 switches off
        let g = p3();
        let seeds = SeedSet::new(3, [0]).unwrap();
        let params = RankParams { kappa: 1.0, ..Default::default() };
        let (set, rv) = divrank(&g, &seeds, &params, &DivRankParams::default(), 1).unwrap();
        assert!(set.flags.contains(Flag::TeleportFallback));
        assert_abs_diff_eq!(rv.scores.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rejects_bad_alpha() {
        let g = p3();
        let seeds = SeedSet::new(3, [0]).unwrap();
        for alpha in [0.0, 1.0, -0.5] {
            let div = DivRankParams { alpha, ..Default::default() };
            assert!(divrank(&g, &seeds, &RankParams::default(), &div, 1).is_err());
        }
    }
}
