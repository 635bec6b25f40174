use std::fmt;
use std::io::Write;
use std::str::FromStr;

use citediv::{Algorithm, CitationGraph};

use crate::config::RunConfig;
use crate::error::{HarnessError, Result};
use crate::output::{fmt_f64, metric_columns, metric_values};
use crate::queries::Query;
use crate::runner::{run_experiment, ResultRow};

/// Per-(algorithm, k) summary over queries.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Queries with measures.
    pub queries: usize,
    /// Queries that ended in an error row.
    pub errors: usize,
    /// Mean per measure column, absent when no query had a value.
    pub mean: Vec<Option<f64>>,
    /// Sample standard deviation per measure column, 0 for one value.
    pub std: Vec<Option<f64>>,
}

fn mean_std(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (Some(mean), Some(0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}

/// Groups result rows by (algorithm, k) in order of first appearance.
pub fn aggregate(rows: &[ResultRow], ells: &[u32]) -> Vec<AggregateRow> {
    let width = metric_columns(ells).len();
    let mut groups: Vec<((Algorithm, usize), Vec<&ResultRow>)> = Vec::new();
    for row in rows {
        let key = (row.algorithm, row.k);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    groups
        .into_iter()
        .map(|((algorithm, k), group)| {
            let reports: Vec<_> = group.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
            let values: Vec<Vec<Option<f64>>> = reports.iter().map(|m| metric_values(m, ells)).collect();
            let (mean, std) =
                (0..width).map(|c| mean_std(&values.iter().filter_map(|v| v[c]).collect::<Vec<_>>())).unzip();
            AggregateRow { algorithm, k, queries: reports.len(), errors: group.len() - reports.len(), mean, std }
        })
        .collect()
}

fn aggregate_header(ells: &[u32]) -> Vec<String> {
    let mut h: Vec<String> = ["algorithm", "k", "queries", "errors"].map(String::from).to_vec();
    for c in metric_columns(ells) {
        h.push(format!("{c}_mean"));
        h.push(format!("{c}_std"));
    }
    h
}

fn aggregate_record(row: &AggregateRow) -> Vec<String> {
    let mut rec = vec![row.algorithm.to_string(), row.k.to_string(), row.queries.to_string(), row.errors.to_string()];
    for (m, s) in row.mean.iter().zip(&row.std) {
        rec.push(m.map(fmt_f64).unwrap_or_default());
        rec.push(s.map(fmt_f64).unwrap_or_default());
    }
    rec
}

pub fn write_aggregate<W: Write>(w: W, rows: &[AggregateRow], ells: &[u32]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(aggregate_header(ells))?;
    for row in rows {
        out.write_record(aggregate_record(row))?;
    }
    out.flush().map_err(|e| HarnessError::Data(format!("writing aggregate: {e}")))
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Gamma,
    Kappa,
    Damping,
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Gamma => "gamma",
            SweepParam::Kappa => "kappa",
            SweepParam::Damping => "d",
        })
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" => Ok(SweepParam::Gamma),
            "kappa" => Ok(SweepParam::Kappa),
            "d" | "damping" => Ok(SweepParam::Damping),
            _ => Err(format!("unknown sweep parameter {s:?}, expected gamma, kappa or d")),
        }
    }
}

impl SweepParam {
    /// Algorithms swept when none are given.
    pub fn default_algorithms(self) -> Vec<Algorithm> {
        match self {
            SweepParam::Gamma => vec![Algorithm::Rlm(None)],
            SweepParam::Kappa | SweepParam::Damping => vec![Algorithm::Darwr],
        }
    }

    fn apply(self, cfg: &mut RunConfig, value: f64) -> Result<()> {
        match self {
            SweepParam::Gamma => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX)) {
                    return Err(HarnessError::config(format!("gamma {value} is not a positive integer")));
                }
                cfg.gamma = Some(value as u32);
            }
            SweepParam::Kappa => cfg.params.kappa = value,
            SweepParam::Damping => cfg.params.damping = value,
        }
        cfg.validate()
    }
}

/// Aggregates for one value of the swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub aggregate: AggregateRow,
}

/// Reruns the experiment once per value.
pub fn run_sweep(
    g: &CitationGraph,
    queries: &[Query],
    cfg: &RunConfig,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(HarnessError::config("sweep needs at least one value"));
    }
    let mut out = Vec::new();
    for &value in values {
        let mut run = cfg.clone();
        param.apply(&mut run, value)?;
        let results = run_experiment(g, queries, &run)?.results;
        out.extend(aggregate(&results, &run.ells).into_iter().map(|aggregate| SweepRow { value, aggregate }));
    }
    Ok(out)
}

pub fn write_sweep<W: Write>(w: W, param: SweepParam, rows: &[SweepRow], ells: &[u32]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["param".to_string(), "value".to_string()];
    header.extend(aggregate_header(ells));
    out.write_record(header)?;
    for row in rows {
        let mut rec = vec![param.to_string(), fmt_f64(row.value)];
        rec.extend(aggregate_record(&row.aggregate));
        out.write_record(rec)?;
    }
    out.flush().map_err(|e| HarnessError::Data(format!("writing sweep: {e}")))
}
