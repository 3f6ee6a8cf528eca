//! Accuracy and timing tables for Legendre polynomials and Bessel functions.

use std::hint::black_box;
use std::time::Instant;

use anyhow::Context;
use clap::ValueEnum;
use phasefn::specfun::{self, NormalizedPhase, SpecialFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Orders used when none are given.
pub const DEFAULT_N_LIST: [u64; 6] = [10, 100, 1_000, 10_000, 100_000, 1_000_000];
pub const DEFAULT_POINTS: usize = 1000;
/// `bench` exits nonzero when any row is less accurate than this.
pub const ACCURACY_TARGET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Legendre,
    Bessel,
}

impl Family {
    pub fn at(self, n: u64) -> SpecialFamily {
        match self {
            Family::Legendre => SpecialFamily::legendre(n),
            Family::Bessel => SpecialFamily::bessel(n),
        }
    }
}

/// Warm-up runs followed by timed repetitions; the median is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timing {
    pub warmup: usize,
    pub reps: usize,
}

impl Default for Timing {
    fn default() -> Self {
        Self { warmup: 1, reps: 5 }
    }
}

impl Timing {
    /// A single untimed-quality pass, for accuracy runs.
    pub fn once() -> Self {
        Self { warmup: 0, reps: 1 }
    }

    fn median<T>(&self, mut f: impl FnMut() -> T) -> (f64, T) {
        for _ in 0..self.warmup {
            black_box(f());
        }
        let mut times = Vec::with_capacity(self.reps.max(1));
        let mut last = None;
        for _ in 0..self.reps.max(1) {
            let start = Instant::now();
            let out = black_box(f());
            times.push(start.elapsed().as_secs_f64());
            last = Some(out);
        }
        times.sort_by(f64::total_cmp);
        (times[times.len() / 2], last.expect("at least one repetition"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub n: u64,
    pub phase_build_time_s: f64,
    pub avg_phase_eval_time_s: f64,
    pub avg_recurrence_eval_time_s: f64,
    pub max_abs_error: f64,
    pub num_points: usize,
    pub seed: u64,
    /// Points too close to an endpoint for the phase, answered by recurrence.
    pub fallback_points: usize,
}

/// Sample points for `family` at order `n`: uniform on `(-1, 1)` for
/// Legendre, uniform on `[2n, 3n]` for Bessel.
pub fn sample_points(family: Family, n: u64, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.rotate_left(32));
    let nf = n as f64;
    (0..count)
        .map(|_| match family {
            Family::Legendre => rng.gen_range(-1.0..1.0),
            Family::Bessel => rng.gen_range(2.0 * nf..=3.0 * nf),
        })
        .collect()
}

/// One row of the table for order `n`.
pub fn run_one(family: Family, n: u64, points: usize, seed: u64, timing: Timing) -> anyhow::Result<EvalReport> {
    let fam = family.at(n);
    let ts = sample_points(family, n, points, seed);

    let (build, np) = timing.median(|| NormalizedPhase::for_family(&fam));
    let np = np.with_context(|| format!("building the phase for n = {n}"))?;

    let (phase_time, phase_vals) = timing.median(|| specfun::eval_special(&np, &ts));
    let phase_vals = phase_vals?;
    let (rec_time, rec_vals) = timing.median(|| ts.iter().map(|&t| specfun::oracle(&fam, t)).collect::<Result<Vec<_>, _>>());
    let rec_vals = rec_vals?;

    let max_abs_error = phase_vals
        .iter()
        .zip(&rec_vals)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut fallback_points = 0;
    for &t in &ts {
        if np.eval(t)?.fallback {
            fallback_points += 1;
        }
    }
    Ok(EvalReport {
        n,
        phase_build_time_s: build,
        avg_phase_eval_time_s: phase_time / points as f64,
        avg_recurrence_eval_time_s: rec_time / points as f64,
        max_abs_error,
        num_points: points,
        seed,
        fallback_points,
    })
}

/// Builds, normalizes and evaluates the phase for every `n`, comparing with
/// the recurrence oracle. Deterministic for a fixed seed.
pub fn run_table(family: Family, n_list: &[u64], points: usize, seed: u64, timing: Timing) -> anyhow::Result<Vec<EvalReport>> {
    anyhow::ensure!(points > 0, "need at least one point");
    anyhow::ensure!(n_list.windows(2).all(|w| w[0] < w[1]), "n list must be ascending");
    n_list.iter().map(|&n| run_one(family, n, points, seed, timing)).collect()
}

pub fn write_reports<W: std::io::Write>(out: W, reports: &[EvalReport]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
