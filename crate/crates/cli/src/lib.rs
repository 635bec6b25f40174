//! Batch experiments over citediv: run every algorithm on a query file,
//! score the results and write flat CSV tables.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod files;
pub mod output;
pub mod queries;
pub mod runner;

pub use aggregate::{aggregate, run_sweep, AggregateRow, SweepParam, SweepRow};
pub use config::{ExperimentConfig, GraphSource, RunConfig};
pub use error::{HarnessError, Result};
pub use queries::{parse_queries, Query};
pub use runner::{
    rescore, run_algorithm, run_experiment, run_query, time_algorithm, ExperimentOutput, RecommendationRow, ResultRow,
};
