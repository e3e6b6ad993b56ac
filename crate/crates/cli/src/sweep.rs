//! Convergence sweep of the Weyl-relation residual over dimensions.
//!
//! One row record per `(D, s, t)` and one series record per `(s, t)` carrying
//! the fitted decay and the recommended tolerance `tol* = 10 × residual(D_max)`.

use ccr_core::algebra::RepresentationKind;
use ccr_core::matrix_rep::{build_pq, build_rep};
use ccr_core::precise::weyl_residual_extended;
use ccr_core::weyl::weyl_residual;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{Precision, RunConfig};
use crate::report::{Record, ReportEnvelope, Status};
use crate::CliResult;

pub const ROW_ID: &str = "sweep.weyl_residual";
pub const SERIES_ID: &str = "sweep.convergence";

/// `‖UV − e^{ist}VU‖ ≤ 2` for unitary `U`, `V`: the a priori bound for the first row.
pub const RESIDUAL_CAP: f64 = 2.0;

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    #[serde(rename = "D")]
    pub dim: usize,
    pub s: f64,
    pub t: f64,
    pub residual: f64,
}

fn residual(config: &RunConfig, dim: usize, s: f64, t: f64) -> CliResult<f64> {
    let margin = config.margin.weyl(dim);
    Ok(match config.precision {
        Precision::Extended => weyl_residual_extended(&config.kind, dim, s, t, margin, config.bits)?,
        Precision::F64 => {
            let pq = build_pq(&build_rep(config.kind.clone(), dim)?)?;
            weyl_residual(&pq, s, t, margin)?
        }
    })
}

/// Least-squares slope of `log10 residual` against `D`, over positive residuals.
pub fn log10_slope(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(_, r)| *r > 0.0).map(|&(d, r)| (d as f64, r.log10())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub fn run(config: &RunConfig) -> CliResult<ReportEnvelope> {
    if let RepresentationKind::Lambda(_) = config.kind {
        let records = config
            .grid
            .iter()
            .map(|&(s, t)| {
                Record::skipped(
                    SERIES_ID,
                    json!({"s": s, "t": t, "dims": config.dims}),
                    "no Weyl-form analogue is defined for the Λ-case representation",
                )
            })
            .collect();
        return Ok(ReportEnvelope::new(config, records));
    }

    let jobs: Vec<(f64, f64, usize)> = config
        .grid
        .iter()
        .flat_map(|&(s, t)| config.dims.iter().map(move |&d| (s, t, d)))
        .collect();
    let values: Vec<CliResult<f64>> =
        jobs.par_iter().map(|&(s, t, d)| residual(config, d, s, t)).collect();

    let mut records = Vec::new();
    let per_series = config.dims.len();
    for (series, &(s, t)) in config.grid.iter().enumerate() {
        let chunk = &values[series * per_series..(series + 1) * per_series];
        let mut points = Vec::new();
        let mut previous = RESIDUAL_CAP;
        let mut monotone = true;
        let mut failed = false;
        for (&d, value) in config.dims.iter().zip(chunk) {
            let params = json!({
                "D": d, "s": s, "t": t,
                "margin": config.margin.weyl(d),
                "precision": config.precision,
            });
            match value {
                Ok(r) => {
                    // strictly below the previous dimension, or an exactly vanishing column
                    let pass = *r < previous || (*r == 0.0 && previous == 0.0);
                    monotone &= pass;
                    records.push(Record::with_verdict(ROW_ID, params, *r, previous, pass));
                    points.push((d, *r));
                    previous = *r;
                }
                Err(e) => {
                    failed = true;
                    records.push(Record::errored(ROW_ID, params, previous, e));
                }
            }
        }
        if failed {
            records.push(Record::errored(SERIES_ID, json!({"s": s, "t": t}), 0.0, "a sweep entry failed"));
            continue;
        }
        let (d_max, r_max) = *points.last().expect("at least two dimensions");
        let tol_star = 10.0 * r_max;
        let ratios: Vec<Option<f64>> =
            points.windows(2).map(|w| (w[1].1 > 0.0).then(|| w[0].1 / w[1].1)).collect();
        let tolerance = config.tol.unwrap_or(tol_star);
        let params = json!({
            "s": s, "t": t,
            "dims": config.dims,
            "largest_dim": d_max,
            "residual_ratios": ratios,
            "log10_slope_per_dim": log10_slope(&points),
            "recommended_tol_star": tol_star,
            "monotone": monotone,
        });
        records.push(Record::with_verdict(SERIES_ID, params, r_max, tolerance, monotone && r_max <= tolerance));
    }
    Ok(ReportEnvelope::new(config, records))
}

/// The row records as a `D,s,t,residual` table.
pub fn rows(env: &ReportEnvelope) -> Vec<Row> {
    env.records
        .iter()
        .filter(|r| r.check_id == ROW_ID && r.status != Status::Skipped)
        .filter_map(|r| {
            Some(Row {
                dim: r.parameters.get("D")?.as_u64()? as usize,
                s: r.parameters.get("s")?.as_f64()?,
                t: r.parameters.get("t")?.as_f64()?,
                residual: r.residual?,
            })
        })
        .collect()
}

pub fn to_csv(env: &ReportEnvelope) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["D", "s", "t", "residual"])?;
    for row in rows(env) {
        w.write_record([row.dim.to_string(), row.s.to_string(), row.t.to_string(), format!("{:e}", row.residual)])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Reads the table back from CSV text.
pub fn parse_csv(text: &str) -> CliResult<Vec<Row>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<Vec<Row>, _>>()?)
}
