//! Numerical checks of the Fourier-side fixed point and of the backward
//! error estimates, tabulated for the CLI and the acceptance tests.

use std::f64::consts::PI;

use phasefn::backwards::{self, PerturbationCheck};
use phasefn::cheb::ChebSeries;
use phasefn::fourier::{
    self, BumpProfile, DecayEnvelope, FourierGridFunction, DEFAULT_INTERVALS, DEFAULT_SHARPNESS,
};
use phasefn::num_complex::Complex64;
use phasefn::phase;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const FIXED_POINT_TOL: f64 = 1e-13;
const FIXED_POINT_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRow {
    /// Passes when `measured <= threshold`.
    pub fn at_most(check: &str, measured: f64, threshold: f64) -> Self {
        Self {
            check: check.to_string(),
            measured,
            threshold,
            pass: measured <= threshold,
        }
    }
}

fn laplace(lambda: f64, gamma: f64, a: f64) -> anyhow::Result<FourierGridFunction> {
    Ok(FourierGridFunction::on_default_grid(lambda, |xi| gamma * (-a * xi.abs()).exp())?)
}

/// Random function with L1 norm `radius`, Hermitian like the transform of a
/// real function.
fn random_in_ball(rng: &mut ChaCha8Rng, template: &FourierGridFunction, radius: f64) -> FourierGridFunction {
    let n = template.n;
    let mut g = FourierGridFunction::zeros(template.xi_max, n).expect("template grid is valid");
    for j in n / 2..=n {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        g.values[j] = z;
        g.values[n - j] = z.conj();
    }
    g.values[n / 2].im = 0.0;
    g.scale(radius / g.l1_norm())
}

/// Largest `||R f - R g||_1 / ||f - g||_1` over `pairs` random pairs in the
/// ball of radius `lambda^2 / 9`. Half the pairs are close together, which
/// probes the derivative of `R`.
pub fn lipschitz_estimate(lambda: f64, pairs: usize, seed: u64) -> anyhow::Result<f64> {
    let b = fourier::make_bump(lambda, DEFAULT_SHARPNESS);
    let v = laplace(lambda, 1.0, 1.0)?;
    let radius = lambda * lambda / 9.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for k in 0..pairs {
        let rf = radius * rng.gen_range(0.5..1.0);
        let f = random_in_ball(&mut rng, &v, rf);
        let g = if k % 2 == 0 {
            let rg = radius * rng.gen_range(0.0..1.0);
            random_in_ball(&mut rng, &v, rg)
        } else {
            let nudge = random_in_ball(&mut rng, &v, 1e-3 * radius);
            let mixed = f.add(&nudge)?;
            // keep the perturbed point inside the ball
            let s = (radius / mixed.l1_norm()).min(1.0);
            mixed.scale(s)
        };
        let num = fourier::apply_r(&f, &v, &b)?.sub(&fourier::apply_r(&g, &v, &b)?)?.l1_norm();
        let den = f.sub(&g)?.l1_norm();
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    Ok(worst)
}

/// Largest ratio of `|exp*_2[f]|` to the lemma's bound over random
/// `f = C exp(-a|xi|)` with `0 < C < a`.
pub fn exp2_lemma_ratio(cases: usize, n: usize, seed: u64) -> anyhow::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let a = rng.gen_range(0.25..4.0);
        let c = a * rng.gen_range(0.01..0.99);
        // wide enough that the profile is far below rounding at the edge
        let xi_max = 30.0 / a;
        let f = FourierGridFunction::from_real_fn(xi_max, n, |xi| c * (-a * xi.abs()).exp())?;
        let e = fourier::exp_star(&f, 2)?;
        for j in 0..=e.n {
            worst = worst.max(e.values[j].norm() / fourier::exp2_lemma_bound(c, a, e.xi(j)));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRun {
    pub lambda: f64,
    pub state: fourier::FixedPointState,
    /// `max |psi| / (2 Gamma exp(-(a - 1/lambda)|xi|))`.
    pub envelope_ratio: f64,
    /// `||psi - psi b||_1`.
    pub pb_bound: f64,
    /// `24 Gamma / (5a) exp(-5 a lambda / 6)`.
    pub theorem_bound: f64,
    pub fixed_point_residual: f64,
}

/// Solves `psi = R[psi]` for `v = Gamma exp(-a|xi|)` on the default grid.
pub fn fixed_point_run(lambda: f64, gamma: f64, a: f64) -> anyhow::Result<FixedPointRun> {
    let b: BumpProfile = fourier::make_bump(lambda, DEFAULT_SHARPNESS);
    let v = laplace(lambda, gamma, a)?;
    let state = fourier::fixed_point_solve(&v, &b, FIXED_POINT_TOL, FIXED_POINT_MAX_ITERS)?;
    let env = DecayEnvelope {
        gamma: 2.0 * gamma,
        a: a - 1.0 / lambda,
    };
    let pb = fourier::build_pb(&state.psi, &b, &v)?;
    let fixed_point_residual = fourier::apply_r(&state.psi, &v, &b)?.sub(&state.psi)?.l1_norm();
    Ok(FixedPointRun {
        lambda,
        envelope_ratio: env.max_ratio(&state.psi),
        pb_bound: pb.bound,
        theorem_bound: 24.0 * gamma / (5.0 * a) * (-5.0 * a * lambda / 6.0).exp(),
        fixed_point_residual,
        state,
    })
}

/// Residual of `(Tf)'' + 4 lambda^2 Tf = f` for `f = exp(-x^2)`, `lambda = 2`.
pub fn t_ode_residual() -> anyhow::Result<f64> {
    let lambda = 2.0;
    let f = ChebSeries::fit(|x| (-x * x).exp(), -8.0, 8.0, 1e-15, 4096)?;
    let tf = fourier::apply_t(&f, lambda)?;
    let d2 = tf.derivative().derivative();
    Ok((0..=1200)
        .map(|k| -6.0 + 12.0 * k as f64 / 1200.0)
        .map(|x| (d2.eval_unchecked(x) + 4.0 * lambda * lambda * tf.eval_unchecked(x) - (-x * x).exp()).abs())
        .fold(0.0, f64::max))
}

/// Largest deviation of the transform of `Tf` from `f^ / (4 lambda^2 - xi^2)`
/// for a Gaussian whose transform is negligible beyond `2 lambda - 1`.
pub fn t_multiplier_error() -> anyhow::Result<f64> {
    let lambda = 2.0;
    let s: f64 = 3.1;
    let f = ChebSeries::fit(|x| (-x * x / (2.0 * s * s)).exp(), -30.0, 30.0, 1e-15, 8192)?;
    let tf = fourier::apply_t(&f, lambda)?;
    let h = 0.02;
    let xs: Vec<f64> = (0..=3000).map(|k| -30.0 + h * k as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| tf.eval_unchecked(x)).collect();
    let mut worst: f64 = 0.0;
    for k in 0..=30 {
        let xi = 3.0 * k as f64 / 30.0;
        let num: f64 = xs.iter().zip(&vals).map(|(x, v)| v * (xi * x).cos()).sum::<f64>() * h;
        let fhat = s * (2.0 * PI).sqrt() * (-s * s * xi * xi / 2.0).exp();
        worst = worst.max((num - fhat / (4.0 * lambda * lambda - xi * xi)).abs());
    }
    Ok(worst)
}

/// Largest violation of the `W_b` and `W~_b` norm bounds over random inputs,
/// as ratios to the bound.
pub fn w_bound_ratios(lambda: f64, trials: usize, seed: u64) -> anyhow::Result<(f64, f64)> {
    let b = fourier::make_bump(lambda, DEFAULT_SHARPNESS);
    let template = FourierGridFunction::zeros(4.0 * lambda, DEFAULT_INTERVALS)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut w0, mut w1): (f64, f64) = (0.0, 0.0);
    for _ in 0..trials {
        let f = random_in_ball(&mut rng, &template, 1.0);
        w0 = w0.max(fourier::apply_w(&f, &b, false).l1_norm() * 2.0 * lambda * lambda);
        w1 = w1.max(fourier::apply_w(&f, &b, true).l1_norm() * std::f64::consts::SQRT_2 * lambda);
    }
    Ok((w0, w1))
}

/// Every Fourier-side check with its measured constant.
pub fn fourier_checks(seed: u64) -> anyhow::Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    rows.push(CheckRow::at_most("lipschitz_R_lambda6", lipschitz_estimate(6.0, 50, seed)?, 0.55));
    rows.push(CheckRow::at_most("exp2_lemma_ratio", exp2_lemma_ratio(10, DEFAULT_INTERVALS, seed)?, 1.0));
    let (w0, w1) = w_bound_ratios(6.0, 20, seed)?;
    rows.push(CheckRow::at_most("W_b_norm_ratio", w0, 1.0));
    rows.push(CheckRow::at_most("W_tilde_b_norm_ratio", w1, 1.0));

    let run = fixed_point_run(6.0, 1.0, 1.0)?;
    rows.push(CheckRow::at_most("fixed_point_residual", run.fixed_point_residual, 10.0 * FIXED_POINT_TOL));
    let ratio = run.state.contraction_ratios(1e-14).into_iter().fold(0.0, f64::max);
    rows.push(CheckRow::at_most("fixed_point_step_ratio", ratio, 0.5));
    rows.push(CheckRow::at_most("decay_envelope_ratio", run.envelope_ratio, 1.0 + 1e-6));
    rows.push(CheckRow::at_most("pb_bound_lambda6", run.pb_bound, run.theorem_bound + 1e-6));
    rows.push(CheckRow::at_most("psi_hermitian_defect", run.state.psi.hermitian_defect(), 1e-14));

    let mut prev = run.pb_bound;
    let mut worst_step: f64 = 0.0;
    for lambda in [8.0, 10.0] {
        let next = fixed_point_run(lambda, 1.0, 1.0)?.pb_bound;
        worst_step = worst_step.max(next / prev);
        prev = next;
    }
    // strictly decreasing: every ratio below one
    rows.push(CheckRow {
        check: "pb_bound_decreasing_in_lambda".into(),
        measured: worst_step,
        threshold: 1.0,
        pass: worst_step < 1.0,
    });
    rows.push(CheckRow::at_most("T_ode_residual", t_ode_residual()?, 1e-8));
    rows.push(CheckRow::at_most("T_multiplier_error", t_multiplier_error()?, 1e-8));
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackwardRow {
    pub case: String,
    pub sup_err: f64,
    pub bound: f64,
    pub ok: bool,
}

impl BackwardRow {
    fn from_check(case: &str, c: &PerturbationCheck) -> Self {
        Self {
            case: case.to_string(),
            sup_err: c.sup_err,
            bound: c.bound,
            ok: c.ok,
        }
    }

    fn gronwall(case: &str, c: &PerturbationCheck) -> Self {
        Self {
            case: format!("{case}/gronwall"),
            sup_err: c.gronwall_ratio,
            bound: 1.0,
            ok: c.gronwall_ratio <= 1.0,
        }
    }
}

/// `q = 1` against `q_b = 1 + dq` at `lambda = 100`.
pub fn constant_case(dq: f64) -> anyhow::Result<PerturbationCheck> {
    let q = ChebSeries::constant(0.0, 1.0, 1.0)?;
    let qb = ChebSeries::constant(0.0, 1.0, 1.0 + dq)?;
    Ok(backwards::perturbation_bound_check(&q, &qb, 100.0, (1.0, 0.0))?)
}

/// The reference coefficient moved to `[0, 1]`, against the coefficient
/// reconstructed from a perturbed `p`, at `lambda = 1000`.
pub fn reference_case(p_shift: f64) -> anyhow::Result<PerturbationCheck> {
    let lambda = 1000.0;
    let problem = phase::make_problem(|s| phase::reference_q(2.0 * s - 1.0), lambda, 0.0, 1.0, 1e-14)?;
    let bump = ChebSeries::fit(|s| p_shift * (7.0 * s).cos(), 0.0, 1.0, 1e-15, 256)?;
    let pb = problem.p.add(&bump)?;
    let qb = backwards::solve_q_from_p(&pb, problem.q.eval(0.0)?, problem.qp.eval(0.0)?)?;
    Ok(backwards::perturbation_bound_check(&problem.q, &qb, lambda, (1.0, 0.0))?)
}

pub fn backward_checks() -> anyhow::Result<Vec<BackwardRow>> {
    let mut rows = Vec::new();
    let q = ChebSeries::constant(0.0, 1.0, 1.0)?;
    let same = backwards::perturbation_bound_check(&q, &q, 100.0, (1.0, 0.0))?;
    rows.push(BackwardRow::from_check("constant_identical", &same));

    let full = constant_case(1e-8)?;
    let half = constant_case(5e-9)?;
    rows.push(BackwardRow::from_check("constant_shift_1e-8", &full));
    rows.push(BackwardRow::gronwall("constant_shift_1e-8", &full));
    rows.push(BackwardRow::from_check("constant_shift_5e-9", &half));
    // the exact error is 2|sin(c dq)|, so halving dq halves it up to O(dq^2)
    rows.push(BackwardRow {
        case: "constant_shift_halving".into(),
        sup_err: half.sup_err,
        bound: 0.5 * full.sup_err * (1.0 + 1e-3),
        ok: half.sup_err <= 0.5 * full.sup_err * (1.0 + 1e-3),
    });

    let reference = reference_case(1e-8)?;
    rows.push(BackwardRow::from_check("reference_q_lambda1000", &reference));
    rows.push(BackwardRow::gronwall("reference_q_lambda1000", &reference));
    Ok(rows)
}

pub fn write_rows<W: std::io::Write, T: Serialize>(out: W, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
