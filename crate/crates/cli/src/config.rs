use std::path::PathBuf;

use citediv::select::{DivRankParams, VisitEstimate};
use citediv::synth::{QueryConfig, SynthConfig};
use citediv::{Algorithm, RankParams, UsefulnessRule};

use crate::error::{HarnessError, Result};

pub const DEFAULT_KS: [usize; 5] = [5, 10, 20, 50, 100];
pub const DEFAULT_ELLS: [u32; 3] = [1, 2, 3];

/// Everything that decides the rows of one run, independent of where the
/// graph and queries come from.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithms: Vec<Algorithm>,
    pub ks: Vec<usize>,
    pub params: RankParams,
    /// DivRank reinforcement exponent.
    pub alpha: f64,
    /// RLM pool multiplier. `None` uses `k`.
    pub gamma: Option<u32>,
    /// Depths for density and expansion columns.
    pub ells: Vec<u32>,
    pub rule: UsefulnessRule,
    /// Worker threads. 0 picks one per core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algorithms: Algorithm::STANDARD.to_vec(),
            ks: DEFAULT_KS.to_vec(),
            params: RankParams::default(),
            alpha: 0.25,
            gamma: None,
            ells: DEFAULT_ELLS.to_vec(),
            rule: UsefulnessRule::WithinTop,
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| HarnessError::config(e.to_string()))?;
        if self.ks.is_empty() || self.ks.contains(&0) {
            return Err(HarnessError::config("k list must be nonempty and positive"));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::config("algorithm list is empty"));
        }
        if self.ells.is_empty() || self.ells.contains(&0) {
            return Err(HarnessError::config("depth list must be nonempty and positive"));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(HarnessError::config(format!("alpha {} must be a nonnegative number", self.alpha)));
        }
        if self.gamma == Some(0) {
            return Err(HarnessError::config("gamma must be positive"));
        }
        Ok(())
    }

    pub fn divrank(&self, estimate: VisitEstimate) -> DivRankParams {
        DivRankParams { alpha: self.alpha, estimate }
    }
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Files { edges: PathBuf, metadata: Option<PathBuf> },
    Synthetic(SynthConfig),
}

/// A full `bench` run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    /// Query file. Without one, queries are drawn from the graph.
    pub queries: Option<PathBuf>,
    pub synthetic_queries: QueryConfig,
    pub out_dir: PathBuf,
    pub run: RunConfig,
}
