//! Shared fixtures for the benchmarks.

use citediv::synth::{generate_synthetic, synthetic_queries, QueryConfig, SynthConfig};
use citediv::{CitationGraph, SeedSet};

/// A year-layered synthetic graph of `n` nodes with ten layers and five
/// references per node, plus one seed set drawn from it.
pub fn fixture(n: usize) -> (CitationGraph, SeedSet) {
    let g = generate_synthetic(&SynthConfig::new(n, 10, 5.0, 1)).expect("valid synthetic config");
    let query =
        synthetic_queries(&g, &QueryConfig { count: 1, ..Default::default() }).expect("valid query config").remove(0);
    let seeds = SeedSet::new(n, query).expect("generated seeds are in range");
    (g, seeds)
}
