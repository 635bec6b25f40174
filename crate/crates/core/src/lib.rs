//! Ranking and result diversification on citation graphs.
//!
//! A query is a set of seed papers. [`darwr`] ranks every paper by a random
//! walk with restart to the seeds whose steps follow references or
//! citations in a tunable ratio. The selectors in [`select`] and
//! [`refine`] then pick `k` papers that are relevant but not redundant, and
//! [`measures`] scores the result.
//!
//! ```
//! use citediv::{darwr, select, CitationGraph, RankParams, SeedSet};
//!
//! let (g, _) = CitationGraph::from_edges(4, [(1, 0), (2, 0), (3, 1), (3, 2)]).unwrap();
//! let seeds = SeedSet::new(4, [3]).unwrap();
//! let ranking = darwr(&g, &seeds, &RankParams::default()).unwrap();
//! let picks = select::il_select(&g, &ranking.scores, &seeds, 2, 1).unwrap();
//! assert!(!picks.nodes().contains(&3));
//! ```

pub mod error;
pub mod graph;
pub mod measures;
pub mod ranking;
pub mod refine;
pub mod select;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{CitationGraph, GraphView, NodeId, Topology};
pub use measures::{evaluate, MetricsReport, QueryContext, UsefulnessRule};
pub use ranking::{darwr, pagerank, ppr, RankParams, RankVector, SeedSet};
pub use select::{Algorithm, Flag, Flags, Recommendation, RecommendationSet};
