mod common;

use std::cmp::Ordering;

use citediv::measures::{density, goodness};
use citediv::select::{
    divrank, dragon_select, il_select, local_maxima_select, rlm_passes, rlm_select, top_k, DivRankParams, VisitEstimate,
};
use citediv::{darwr, CitationGraph, NodeId, RankParams, RecommendationSet, SeedSet};
use common::{arb_instance, random_graph};
use proptest::prelude::*;

fn order(scores: &[f64], a: NodeId, b: NodeId) -> Ordering {
    scores[b as usize].partial_cmp(&scores[a as usize]).unwrap().then(a.cmp(&b))
}

fn naive_top_k(scores: &[f64], seeds: &[NodeId], k: usize) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = (0..scores.len() as NodeId).filter(|v| !seeds.contains(v)).collect();
    ids.sort_by(|&a, &b| order(scores, a, b));
    ids.truncate(k);
    ids
}

fn neighbors(g: &CitationGraph, v: NodeId) -> Vec<NodeId> {
    g.reference_slice(v).iter().chain(g.citer_slice(v)).copied().collect()
}

/// Nodes of `pool` strictly above all their neighbors inside `pool`.
fn naive_maxima(g: &CitationGraph, scores: &[f64], pool: &[NodeId]) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = pool
        .iter()
        .copied()
        .filter(|&v| {
            neighbors(g, v).iter().filter(|w| pool.contains(w)).all(|&w| scores[w as usize] < scores[v as usize])
        })
        .collect();
    out.sort_by(|&a, &b| order(scores, a, b));
    out
}

fn naive_rlm_passes(g: &CitationGraph, scores: &[f64], seeds: &[NodeId], k: usize, gamma: usize) -> Vec<Vec<NodeId>> {
    let mut pool = naive_top_k(scores, seeds, gamma * k);
    let mut passes = Vec::new();
    let mut taken = 0;
    while taken < k && !pool.is_empty() {
        let mut found = naive_maxima(g, scores, &pool);
        if found.is_empty() {
            // plateau: fall back to the total order
            found = pool
                .iter()
                .copied()
                .filter(|&v| neighbors(g, v).iter().filter(|w| pool.contains(w)).all(|&w| order(scores, v, w).is_lt()))
                .collect();
            found.sort_by(|&a, &b| order(scores, a, b));
        }
        found.truncate(k - taken);
        pool.retain(|v| !found.contains(v));
        taken += found.len();
        passes.push(found);
    }
    passes
}

fn check_contract(set: &RecommendationSet, seeds: &SeedSet, k: usize) -> Result<(), TestCaseError> {
    let nodes = set.nodes();
    prop_assert!(nodes.iter().all(|&v| !seeds.contains(v)));
    let mut sorted = nodes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    prop_assert_eq!(sorted.len(), nodes.len());
    prop_assert!(nodes.len() <= k);
    prop_assert_eq!(nodes.len() < k, set.is_partial());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn selectors_honor_the_contract((g, scores, seed_ids) in arb_instance(25), k in 1usize..8, gamma in 1usize..5) {
        let n = g.node_count();
        let seeds = SeedSet::new(n, seed_ids.iter().copied()).unwrap();
        let params = RankParams::default();
        let sets = [
            top_k(&scores, &seeds, k),
            il_select(&g, &scores, &seeds, k, 1).unwrap(),
            il_select(&g, &scores, &seeds, k, 2).unwrap(),
            local_maxima_select(&g, &scores, &seeds, k),
            rlm_select(&g, &scores, &seeds, k, gamma).unwrap(),
            dragon_select(&g, &scores, &seeds, k, &params),
        ];
        for set in &sets {
            check_contract(set, &seeds, k)?;
        }
        // IL and LM may stop short while non-seeds remain, the others may not
        let available = n - seeds.len();
        prop_assert_eq!(sets[0].len(), k.min(available));
        prop_assert_eq!(sets[4].len(), k.min(available));
        prop_assert_eq!(sets[5].len(), k.min(available));
    }

    #[test]
    fn top_k_matches_full_sort((_g, scores, seed_ids) in arb_instance(25), k in 0usize..30) {
        let seeds = SeedSet::new(scores.len(), seed_ids.iter().copied()).unwrap();
        prop_assert_eq!(top_k(&scores, &seeds, k).nodes(), naive_top_k(&scores, seeds.ids(), k));
    }

    #[test]
    fn rlm_reductions((g, scores, seed_ids) in arb_instance(20), k in 1usize..6) {
        let n = g.node_count();
        let seeds = SeedSet::new(n, seed_ids.iter().copied()).unwrap();
        prop_assert_eq!(rlm_select(&g, &scores, &seeds, k, 1).unwrap().nodes(), top_k(&scores, &seeds, k).nodes());
        let wide = n.div_ceil(k);
        let passes = rlm_passes(&g, &scores, &seeds, k, wide).unwrap();
        let lm = local_maxima_select(&g, &scores, &seeds, k).nodes();
        let mut maxima = naive_maxima(&g, &scores, &naive_top_k(&scores, seeds.ids(), n));
        maxima.truncate(k);
        prop_assert_eq!(&lm, &maxima);
        if !lm.is_empty() {
            prop_assert_eq!(&passes[0], &lm);
        }
    }

    #[test]
    fn rlm_matches_trace_oracle((g, scores, seed_ids) in arb_instance(20), k in 1usize..6, gamma in 1usize..6) {
        let seeds = SeedSet::new(g.node_count(), seed_ids.iter().copied()).unwrap();
        let got = rlm_passes(&g, &scores, &seeds, k, gamma).unwrap();
        prop_assert_eq!(got, naive_rlm_passes(&g, &scores, seeds.ids(), k, gamma));
    }

    #[test]
    fn structural_zero_densities((g, scores, seed_ids) in arb_instance(25), k in 2usize..8) {
        let seeds = SeedSet::new(g.node_count(), seed_ids.iter().copied()).unwrap();
        let il1 = il_select(&g, &scores, &seeds, k, 1).unwrap().nodes();
        let il2 = il_select(&g, &scores, &seeds, k, 2).unwrap().nodes();
        let lm = local_maxima_select(&g, &scores, &seeds, k).nodes();
        for (set, ell) in [(&il1, 1), (&il2, 1), (&il2, 2), (&lm, 1)] {
            prop_assert_eq!(density(&g, set, ell).unwrap_or(0.0), 0.0);
        }
    }

    #[test]
    fn dragon_starts_with_top_pick((g, scores, seed_ids) in arb_instance(25)) {
        let seeds = SeedSet::new(g.node_count(), seed_ids.iter().copied()).unwrap();
        let d = dragon_select(&g, &scores, &seeds, 3, &RankParams::default());
        prop_assert_eq!(d.nodes().first().copied(), top_k(&scores, &seeds, 1).nodes().first().copied());
    }
}

fn subsets(items: &[NodeId], k: usize) -> Vec<Vec<NodeId>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

#[test]
fn dragon_is_near_optimal_on_small_graphs() {
    let mut worst: f64 = 1.0;
    for seed in 0..50u64 {
        let n = 6 + seed as usize % 7;
        let g = random_graph(seed, n, 1.5 + (seed % 3) as f64);
        let seeds = SeedSet::new(n, [(seed % n as u64) as NodeId]).unwrap();
        let params = RankParams::default();
        let scores = darwr(&g, &seeds, &params).unwrap().scores;
        let candidates: Vec<NodeId> = (0..n as NodeId).filter(|&v| !seeds.contains(v)).collect();
        for k in 1..=3 {
            let greedy = dragon_select(&g, &scores, &seeds, k, &params).nodes();
            let got = goodness(&greedy, &scores, &g, params.damping, params.kappa);
            let best = subsets(&candidates, k)
                .iter()
                .map(|s| goodness(s, &scores, &g, params.damping, params.kappa))
                .fold(f64::MIN, f64::max);
            assert!(got <= best + 1e-12);
            worst = worst.min(got / best);
        }
    }
    assert!(worst >= 0.95, "worst greedy/optimum ratio {worst}");
}

#[test]
fn divrank_outputs_honor_the_contract() {
    for seed in 0..10u64 {
        let g = random_graph(seed, 30, 2.0);
        let seeds = SeedSet::new(30, [2, 11]).unwrap();
        for estimate in [VisitEstimate::Pointwise, VisitEstimate::Cumulative] {
            let (set, rv) =
                divrank(&g, &seeds, &RankParams::default(), &DivRankParams { alpha: 0.25, estimate }, 6).unwrap();
            assert_eq!(set.len(), 6);
            assert!(set.nodes().iter().all(|&v| !seeds.contains(v)));
            assert!((rv.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert_eq!(set.nodes(), top_k(&rv.scores, &seeds, 6).nodes());
        }
    }
}
