use std::io::{Read, Write};

use citediv::{Algorithm, MetricsReport};

use crate::error::{HarnessError, Result};
use crate::runner::{RecommendationRow, ResultRow};

/// Formats `x` with 9 significant digits, positional when that stays short,
/// with trailing zeros dropped.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-5..15).contains(&exp) {
        return sci;
    }
    let s = format!("{x:.prec$}", prec = (8 - exp).max(0) as usize);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Names of the measure columns, in table order.
pub fn metric_columns(ells: &[u32]) -> Vec<String> {
    let mut cols: Vec<String> = ["rel", "diff", "use", "goodness"].map(String::from).to_vec();
    cols.extend(ells.iter().map(|l| format!("dens_{l}")));
    cols.extend(ells.iter().map(|l| format!("sigma_{l}")));
    cols.extend(["avg_year", "avg_pairwise_dist", "avg_min_dist_to_M", "runtime_ms"].map(String::from));
    cols
}

/// Measure values in [`metric_columns`] order. The average year is absent
/// when no selected node has a year.
pub fn metric_values(m: &MetricsReport, ells: &[u32]) -> Vec<Option<f64>> {
    let mut v = vec![Some(m.rel), Some(m.diff), Some(m.usefulness), Some(m.goodness)];
    v.extend(ells.iter().map(|&l| m.density_at(l)));
    v.extend(ells.iter().map(|&l| m.expansion_at(l)));
    v.extend([m.avg_year, Some(m.avg_pairwise_dist), Some(m.avg_min_dist_to_seeds), Some(m.runtime_ms)]);
    v
}

pub fn results_header(ells: &[u32]) -> Vec<String> {
    let mut h: Vec<String> = ["query_id", "algorithm", "k"].map(String::from).to_vec();
    h.extend(metric_columns(ells));
    h.push("flags".to_string());
    h
}

pub fn write_results<W: Write>(w: W, rows: &[ResultRow], ells: &[u32]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let header = results_header(ells);
    out.write_record(&header)?;
    for row in rows {
        let mut rec = vec![row.query_id.to_string(), row.algorithm.to_string(), row.k.to_string()];
        match &row.outcome {
            Ok(m) => {
                let mut values = metric_values(m, ells);
                if !row.timed {
                    *values.last_mut().expect("runtime column") = None;
                }
                rec.extend(values.into_iter().map(fmt_opt));
                rec.push(m.flags.to_string());
            }
            Err(msg) => {
                rec.extend(vec![String::new(); header.len() - 4]);
                rec.push(format!("error: {msg}"));
            }
        }
        out.write_record(&rec)?;
    }
    out.flush().map_err(|e| HarnessError::Data(format!("writing results: {e}")))
}

const RECOMMENDATION_HEADER: [&str; 6] = ["query_id", "algorithm", "k", "rank", "node", "score"];

pub fn write_recommendations<W: Write>(w: W, rows: &[RecommendationRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RECOMMENDATION_HEADER)?;
    for r in rows {
        out.write_record([
            r.query_id.to_string(),
            r.algorithm.to_string(),
            r.k.to_string(),
            r.rank.to_string(),
            r.node.to_string(),
            fmt_f64(r.score),
        ])?;
    }
    out.flush().map_err(|e| HarnessError::Data(format!("writing recommendations: {e}")))
}

pub fn read_recommendations<R: Read>(r: R) -> Result<Vec<RecommendationRow>> {
    let mut input = csv::Reader::from_reader(r);
    let header = input.headers()?.clone();
    if header.iter().ne(RECOMMENDATION_HEADER) {
        return Err(HarnessError::Data(format!(
            "unexpected recommendations header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut rows = Vec::new();
    for (idx, rec) in input.records().enumerate() {
        let rec = rec?;
        let bad = |field: &str| HarnessError::Data(format!("recommendations row {}: bad {field}", idx + 1));
        rows.push(RecommendationRow {
            query_id: rec[0].parse().map_err(|_| bad("query_id"))?,
            algorithm: rec[1].parse::<Algorithm>().map_err(|_| bad("algorithm"))?,
            k: rec[2].parse().map_err(|_| bad("k"))?,
            rank: rec[3].parse().map_err(|_| bad("rank"))?,
            node: rec[4].parse().map_err(|_| bad("node"))?,
            score: rec[5].parse().map_err(|_| bad("score"))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(7.0 / 12.0), "0.583333333");
        assert_eq!(fmt_f64(1995.123456789), "1995.12346");
        assert_eq!(fmt_f64(-0.25), "-0.25");
        assert_eq!(fmt_f64(9.9999999999), "10");
        assert_eq!(fmt_f64(1.5e-7), "1.50000000e-7");
        assert_eq!(fmt_f64(2.0f64.powi(60)), "1.15292150e18");
    }

    #[test]
    fn default_header_is_exact() {
        assert_eq!(
            results_header(&[1, 2, 3]).join(","),
            "query_id,algorithm,k,rel,diff,use,goodness,dens_1,dens_2,dens_3,sigma_1,sigma_2,sigma_3,avg_year,\
             avg_pairwise_dist,avg_min_dist_to_M,runtime_ms,flags"
        );
    }
}
