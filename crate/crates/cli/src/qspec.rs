//! Phase functions for user-supplied coefficients.

use std::path::Path;

use anyhow::Context;
use phasefn::cheb::{self, ChebSeries};
use phasefn::phase::{self, KummerProblem, LogPhase, NewtonOptions, PhaseFunction};
use serde::{Deserialize, Serialize};

/// Coefficient `q` on `interval`, given either by Chebyshev coefficients or
/// by monomial coefficients (constant term first).
///
/// ```json
/// {"interval": [-1, 1], "polynomial": [2, 0, 1]}
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QSpec {
    pub interval: [f64; 2],
    #[serde(default)]
    pub chebyshev: Option<Vec<f64>>,
    #[serde(default)]
    pub polynomial: Option<Vec<f64>>,
}

impl QSpec {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn series(&self) -> anyhow::Result<ChebSeries> {
        let [a, b] = self.interval;
        match (&self.chebyshev, &self.polynomial) {
            (Some(c), None) => Ok(ChebSeries::new(a, b, c.clone())?),
            (None, Some(m)) => {
                // exact for polynomials once the order reaches the degree
                let order = m.len().max(2);
                let values: Vec<f64> = cheb::nodes(a, b, order)
                    .into_iter()
                    .map(|t| m.iter().rev().fold(0.0, |acc, c| acc * t + c))
                    .collect();
                Ok(ChebSeries::from_values(a, b, &values)?.chopped(1e-16))
            }
            _ => anyhow::bail!("give exactly one of \"chebyshev\" or \"polynomial\""),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseRow {
    pub t: f64,
    pub alpha: f64,
    pub alpha_prime: f64,
    pub u: f64,
    pub v: f64,
}

pub struct PhaseRun {
    pub problem: KummerProblem,
    pub log_phase: LogPhase,
    pub phase: PhaseFunction,
}

/// Newton solve and phase construction, with `alpha = 0` at the left end.
pub fn build(spec: &QSpec, lambda: f64, opts: &NewtonOptions) -> anyhow::Result<PhaseRun> {
    let q = spec.series()?;
    let problem = KummerProblem::from_series(q, lambda, 1e-14)?;
    let log_phase = phase::solve_kummer_log_with(&problem, opts)?;
    let a = problem.interval().0;
    let phase = phase::build_phase(&log_phase, &problem, a, 0.0)?;
    Ok(PhaseRun {
        problem,
        log_phase,
        phase,
    })
}

/// `samples` equispaced rows of the phase and its basis.
pub fn rows(run: &PhaseRun, samples: usize) -> Vec<PhaseRow> {
    let (a, b) = run.phase.interval();
    let m = samples.max(2) - 1;
    (0..=m)
        .map(|k| {
            let t = if k == m { b } else { a + (b - a) * k as f64 / m as f64 };
            let basis = run.phase.basis_unchecked(t);
            PhaseRow {
                t,
                alpha: run.phase.alpha.eval_unchecked(t),
                alpha_prime: run.phase.alpha_prime.eval_unchecked(t),
                u: basis.u,
                v: basis.v,
            }
        })
        .collect()
}
