//! Chebyshev coefficient decay of `q` and of the logarithm-form solution `r`.

use std::path::Path;

use anyhow::Context;
use phasefn::cheb::{self, ChebSeries};
use phasefn::phase::{self, NewtonOptions};
use serde::Serialize;

pub const DECAY_ROWS: usize = 500;
/// Coefficients below this (relative to the largest) count as unresolved
/// noise and are left out of the slope fit.
const SLOPE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayRow {
    pub k: usize,
    pub log10_abs_coeff_q: f64,
    pub log10_abs_coeff_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySummary {
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `log10 |c_k|` over the resolved range.
    pub slope_q: f64,
    pub slope_r: f64,
    /// First `k` from which every coefficient stays below `1e-12`, if any.
    pub q_below: Option<usize>,
    pub r_below: Option<usize>,
    pub newton_iters: usize,
}

impl DecaySummary {
    /// Both sequences drop below `1e-12` (`1e-11` for `r`) within the table,
    /// and `r` decays strictly more slowly than `q`.
    pub fn passes(&self) -> bool {
        let r_ok = self.r_below.is_some() || self.rows.iter().skip(DECAY_ROWS / 2).all(|r| r.log10_abs_coeff_r < -11.0);
        self.q_below.is_some() && r_ok && self.slope_r > self.slope_q
    }
}

/// Expansion of `f` with exactly `count` coefficients.
fn coefficients(f: impl Fn(f64) -> f64, count: usize) -> anyhow::Result<Vec<f64>> {
    let values: Vec<f64> = cheb::nodes(-1.0, 1.0, count - 1).into_iter().map(f).collect();
    Ok(ChebSeries::from_values(-1.0, 1.0, &values)?.coeffs().to_vec())
}

fn log10_abs(c: f64) -> f64 {
    c.abs().max(f64::MIN_POSITIVE).log10()
}

fn first_below(logs: &[f64], level: f64) -> Option<usize> {
    let k = logs.iter().rposition(|&l| l >= level).map_or(0, |i| i + 1);
    (k < logs.len()).then_some(k)
}

fn resolved_slope(logs: &[f64]) -> f64 {
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let end = logs
        .iter()
        .rposition(|&l| l >= top + SLOPE_FLOOR.log10())
        .map_or(logs.len(), |i| i + 1);
    let pts: Vec<(f64, f64)> = logs[..end].iter().enumerate().map(|(k, &l)| (k as f64, l)).collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx) * (p.0 - mx)));
    sxy / sxx
}

/// Solves for `r` with the reference coefficient on `[-1, 1]` and tabulates
/// the first 500 Chebyshev coefficients of `q` and `r`.
pub fn decay_table(lambda: f64, opts: &NewtonOptions) -> anyhow::Result<DecaySummary> {
    let problem = phase::make_problem(phase::reference_q, lambda, -1.0, 1.0, 1e-14)?;
    let lp = phase::solve_kummer_log_with(&problem, opts).context("Newton iteration")?;
    let cq = coefficients(phase::reference_q, DECAY_ROWS)?;
    let cr = coefficients(|t| lp.r.eval_unchecked(t), DECAY_ROWS)?;
    let lq: Vec<f64> = cq.iter().map(|&c| log10_abs(c)).collect();
    let lr: Vec<f64> = cr.iter().map(|&c| log10_abs(c)).collect();
    let rows = (0..DECAY_ROWS)
        .map(|k| DecayRow {
            k,
            log10_abs_coeff_q: lq[k],
            log10_abs_coeff_r: lr[k],
        })
        .collect();
    Ok(DecaySummary {
        rows,
        slope_q: resolved_slope(&lq),
        slope_r: resolved_slope(&lr),
        q_below: first_below(&lq, -12.0),
        r_below: first_below(&lr, -12.0),
        newton_iters: lp.newton_iters,
    })
}

pub fn export_decay(lambda: f64, opts: &NewtonOptions, out: &Path) -> anyhow::Result<DecaySummary> {
    let summary = decay_table(lambda, opts)?;
    let mut w = csv::Writer::from_path(out).with_context(|| format!("creating {}", out.display()))?;
    for row in &summary.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(summary)
}
