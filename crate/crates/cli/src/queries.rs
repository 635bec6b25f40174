use std::io::BufRead;

use citediv::NodeId;

use crate::error::{HarnessError, Result};

/// One line of a query file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    /// Position among the non-empty lines, from 0.
    pub id: usize,
    /// Seed IDs as written, possibly unknown to the graph.
    pub seeds: Vec<u64>,
}

impl Query {
    /// Seeds that exist in a graph of `n` nodes, plus the ones that do not.
    pub fn resolve(&self, n: usize) -> (Vec<NodeId>, Vec<u64>) {
        let (known, unknown): (Vec<u64>, Vec<u64>) = self.seeds.iter().partition(|&&s| s < n as u64);
        (known.into_iter().map(|s| s as NodeId).collect(), unknown)
    }
}

/// Reads one comma-separated query per line. Text after `#` is ignored, as
/// are blank lines.
pub fn parse_queries<R: BufRead>(reader: R) -> Result<Vec<Query>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| HarnessError::Data(format!("reading queries: {e}")))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let seeds = body
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>().map_err(|_| HarnessError::Data(format!("query line {}: bad seed id {t:?}", idx + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Query { id: out.len(), seeds });
    }
    Ok(out)
}

/// Wraps generated seed sets as queries.
pub fn from_seed_sets(sets: Vec<Vec<NodeId>>) -> Vec<Query> {
    sets.into_iter()
        .enumerate()
        .map(|(id, seeds)| Query { id, seeds: seeds.into_iter().map(u64::from).collect() })
        .collect()
}

/// Renders queries in the format [`parse_queries`] reads.
pub fn format_queries(queries: &[Query]) -> String {
    let mut out = String::new();
    for q in queries {
        let line: Vec<String> = q.seeds.iter().map(u64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
