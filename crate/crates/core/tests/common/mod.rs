#![allow(dead_code, clippy::needless_range_loop)]

use citediv::{CitationGraph, NodeId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Builds a graph from arbitrary pairs, dropping self-loops and giving any
/// isolated node an edge to its successor.
pub fn graph_from(n: usize, raw: &[(usize, usize)]) -> CitationGraph {
    let mut edges: Vec<(NodeId, NodeId)> =
        raw.iter().filter(|(u, v)| u % n != v % n).map(|&(u, v)| ((u % n) as NodeId, (v % n) as NodeId)).collect();
    let mut touched = vec![false; n];
    for &(u, v) in &edges {
        touched[u as usize] = true;
        touched[v as usize] = true;
    }
    for v in 0..n {
        if !touched[v] {
            edges.push((v as NodeId, ((v + 1) % n) as NodeId));
        }
    }
    CitationGraph::from_edges(n, edges).unwrap().0
}

/// Random directed graph with mixed degrees: a few hubs attract many edges.
pub fn random_graph(seed: u64, n: usize, avg_degree: f64) -> CitationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (avg_degree * n as f64).round() as usize;
    let hubs = (n / 8).max(1);
    let raw: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = if rng.gen_bool(0.4) { rng.gen_range(0..hubs) } else { rng.gen_range(0..n) };
            (u, v)
        })
        .collect();
    graph_from(n, &raw)
}

/// Random DAG: edges only from higher to lower IDs.
pub fn random_dag(seed: u64, n: usize, p: f64) -> CitationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::new();
    for u in 1..n {
        for v in 0..u {
            if rng.gen_bool(p) {
                raw.push((u, v));
            }
        }
    }
    // keep it a DAG when patching isolated nodes
    let mut touched = vec![false; n];
    for &(u, v) in &raw {
        touched[u] = true;
        touched[v] = true;
    }
    for v in 0..n {
        if !touched[v] {
            raw.push(if v == 0 { (1, 0) } else { (v, v - 1) });
        }
    }
    graph_from(n, &raw)
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = CitationGraph> {
    (2..=max_n)
        .prop_flat_map(|n| proptest::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |raw| graph_from(n, &raw)))
}

/// Graph plus a score vector and a seed list.
pub fn arb_instance(max_n: usize) -> impl Strategy<Value = (CitationGraph, Vec<f64>, Vec<NodeId>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.node_count();
        // scores on a coarse grid so ties happen
        let scores = proptest::collection::vec((0u32..20).prop_map(|x| x as f64 / 20.0), n);
        let seeds = proptest::collection::vec(0..n as NodeId, 0..=(n / 3).max(1));
        (Just(g), scores, seeds)
    })
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[row][c] -= f * a[col][c];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Dense transition matrix of the direction-aware walk on `edges`, with
/// the rows of `sinks` zeroed.
pub fn dense_transitions(n: usize, edges: &[(NodeId, NodeId)], d: f64, kappa: f64, sinks: &[NodeId]) -> Vec<Vec<f64>> {
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    for &(u, v) in edges {
        out_deg[u as usize] += 1;
        in_deg[v as usize] += 1;
    }
    let mut t = vec![vec![0.0; n]; n];
    for &(u, v) in edges {
        // u cites v: u passes rank along the reference, v back to its citer
        t[u as usize][v as usize] += d * (1.0 - kappa) / out_deg[u as usize] as f64;
        t[v as usize][u as usize] += d * kappa / in_deg[v as usize] as f64;
    }
    for &s in sinks {
        t[s as usize].iter_mut().for_each(|x| *x = 0.0);
    }
    t
}

/// Fixpoint of `p = (1 - d) p* + T^T p` by a direct solve.
pub fn dense_fixpoint(t: &[Vec<f64>], prior: &[(NodeId, f64)], d: f64) -> Vec<f64> {
    let n = t.len();
    let mut a = vec![vec![0.0; n]; n];
    for v in 0..n {
        a[v][v] = 1.0;
        for u in 0..n {
            a[v][u] -= t[u][v];
        }
    }
    let mut b = vec![0.0; n];
    for &(s, w) in prior {
        b[s as usize] += (1.0 - d) * w;
    }
    solve_dense(a, b)
}

/// Fixpoint of the direction-aware walk with restart to `seeds`.
pub fn dense_darwr(g: &CitationGraph, seeds: &[NodeId], d: f64, kappa: f64) -> Vec<f64> {
    let edges: Vec<_> = g.edges().collect();
    let t = dense_transitions(g.node_count(), &edges, d, kappa, &[]);
    let prior: Vec<_> = seeds.iter().map(|&s| (s, 1.0 / seeds.len() as f64)).collect();
    dense_fixpoint(&t, &prior, d)
}

/// All-pairs undirected hop distances, `n` when unreachable.
pub fn floyd_warshall(g: &CitationGraph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u as usize][v as usize] = 1;
        d[v as usize][u as usize] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d.into_iter().map(|row| row.into_iter().map(|x| if x >= inf { n as u32 } else { x as u32 }).collect()).collect()
}

/// Direct evaluation of every measure from all-pairs distances and a dense
/// adjacency matrix.
pub struct Naive {
    pub dist: Vec<Vec<u32>>,
    pub adj: Vec<Vec<f64>>,
}

impl Naive {
    pub fn new(g: &CitationGraph) -> Self {
        let n = g.node_count();
        let mut adj = vec![vec![0.0; n]; n];
        for (u, v) in g.edges() {
            adj[u as usize][v as usize] = 1.0 / g.reference_slice(u).len() as f64;
        }
        Naive { dist: floyd_warshall(g), adj }
    }

    pub fn sorted_non_seed(scores: &[f64], seeds: &[NodeId]) -> Vec<f64> {
        let mut s: Vec<f64> =
            (0..scores.len()).filter(|v| !seeds.contains(&(*v as NodeId))).map(|v| scores[v]).collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }

    pub fn rel(scores: &[f64], seeds: &[NodeId], set: &[NodeId], k: usize) -> Option<f64> {
        let top: f64 = Self::sorted_non_seed(scores, seeds).iter().take(k).sum();
        let got: f64 = set.iter().map(|&v| scores[v as usize]).sum();
        (top > 0.0).then(|| got / top)
    }

    pub fn usefulness(scores: &[f64], seeds: &[NodeId], set: &[NodeId], k: usize) -> Option<f64> {
        if set.is_empty() {
            return None;
        }
        let sorted = Self::sorted_non_seed(scores, seeds);
        if sorted.len() < 10 * k {
            return Some(1.0);
        }
        let threshold = sorted[10 * k - 1];
        Some(set.iter().filter(|&&v| scores[v as usize] >= threshold).count() as f64 / set.len() as f64)
    }

    pub fn goodness(&self, scores: &[f64], set: &[NodeId], d: f64, kappa: f64) -> f64 {
        let mut first = 0.0;
        let mut second = 0.0;
        for &i in set {
            for &j in set {
                first += self.adj[j as usize][i as usize] * scores[j as usize];
                second += self.adj[i as usize][j as usize] * scores[i as usize];
            }
        }
        2.0 * set.iter().map(|&v| scores[v as usize]).sum::<f64>() - d * kappa * first - d * (1.0 - kappa) * second
    }

    pub fn pairs(&self, set: &[NodeId]) -> Vec<u32> {
        let mut out = Vec::new();
        for (a, &u) in set.iter().enumerate() {
            for (b, &v) in set.iter().enumerate() {
                if a != b {
                    out.push(self.dist[u as usize][v as usize]);
                }
            }
        }
        out
    }

    pub fn density(&self, set: &[NodeId], ell: u32) -> Option<f64> {
        let pairs = self.pairs(set);
        (!pairs.is_empty()).then(|| pairs.iter().filter(|&&x| x <= ell).count() as f64 / pairs.len() as f64)
    }

    pub fn pairwise(&self, set: &[NodeId]) -> Option<f64> {
        let pairs = self.pairs(set);
        (!pairs.is_empty()).then(|| pairs.iter().map(|&x| x as f64).sum::<f64>() / pairs.len() as f64)
    }

    pub fn expansion(&self, set: &[NodeId], ell: u32) -> f64 {
        let n = self.dist.len();
        let covered = (0..n).filter(|&v| set.iter().any(|&s| self.dist[s as usize][v] <= ell)).count();
        covered as f64 / n as f64
    }

    pub fn min_to_seeds(&self, set: &[NodeId], seeds: &[NodeId]) -> Option<f64> {
        if set.is_empty() {
            return None;
        }
        let total: u32 =
            set.iter().map(|&v| seeds.iter().map(|&s| self.dist[v as usize][s as usize]).min().unwrap()).sum();
        Some(total as f64 / set.len() as f64)
    }
}
