//! Phase functions by Newton iteration on the logarithm form of Kummer's
//! equation.
//!
//! Writing `alpha'(t)^2 = lambda^2 exp(r(t))`, Kummer's equation becomes
//!
//! ```text
//! r'' - r'^2 / 4 + 4 lambda^2 (exp(r) - q) = 0,
//! ```
//!
//! whose WKB approximation `r0 = log q` is already accurate to `O(1/lambda^2)`.
//! Each Newton update solves the linearized equation
//! `h'' - r'h'/2 + 4 lambda^2 exp(r) h = f` by Chebyshev collocation with
//! zero-slope end conditions. The oscillatory homogeneous part of `h` is small
//! and sits in high Chebyshev modes, so it is removed by truncating the update
//! above a fixed order.

use nalgebra::{DMatrix, DVector};

use crate::cheb::{self, ChebSeries};
use crate::error::{Error, Result};

/// Default grid order for the collocation solve.
pub const DEFAULT_GRID: usize = 256;
/// Default number of modes kept above the resolved order of `q`.
pub const DEFAULT_FILTER_MARGIN: usize = 16;
/// Largest Chebyshev order any internal fit may use.
pub const MAX_FIT_ORDER: usize = 8192;

const DENSE_SAMPLES: usize = 2001;
const PIVOT_FLOOR: f64 = 1e-14;

/// The coefficient `q`, its derivatives and the WKB perturbation `p` of
/// `y'' + lambda^2 q y = 0` on a fixed interval.
#[derive(Debug, Clone)]
pub struct KummerProblem {
    pub q: ChebSeries,
    pub qp: ChebSeries,
    pub qpp: ChebSeries,
    pub p: ChebSeries,
    pub lambda: f64,
    pub tol: f64,
}

impl KummerProblem {
    /// Builds the problem from an already fitted coefficient.
    pub fn from_series(q: ChebSeries, lambda: f64, tol: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
        }
        let (a, b) = q.interval();
        let qmin = cheb::uniform_points(a, b, DENSE_SAMPLES)
            .chain(cheb::nodes(a, b, q.order()))
            .map(|t| (t, q.eval_unchecked(t)))
            .fold((a, f64::INFINITY), |m, v| if v.1 < m.1 { v } else { m });
        if !(qmin.1 > 0.0) {
            return Err(Error::NonPositiveQ {
                t: qmin.0,
                value: qmin.1,
            });
        }
        let qp = q.derivative();
        let qpp = qp.derivative();
        let p = ChebSeries::fit_scaled(
            |t| {
                let (qv, d1, d2) = (q.eval_unchecked(t), qp.eval_unchecked(t), qpp.eval_unchecked(t));
                p_formula(qv, d1, d2)
            },
            a,
            b,
            tol,
            1.0,
            MAX_FIT_ORDER,
        )?;
        Ok(Self {
            q,
            qp,
            qpp,
            p,
            lambda,
            tol,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.q.interval()
    }

    /// Filter cutoff used when none is given: resolved order of `q` plus `margin`.
    pub fn default_cutoff(&self, margin: usize) -> usize {
        self.q.order() + margin
    }
}

/// `p = (5/4 (q'/q)^2 - q''/q) / q`.
pub fn p_formula(q: f64, qp: f64, qpp: f64) -> f64 {
    (1.25 * (qp / q).powi(2) - qpp / q) / q
}

/// Smooth, nonconstant test coefficient on `[-1, 1]`:
/// `q(t) = 3 + 1/(1 + 10 t^2) + t^3 cos(5 t)`.
pub fn reference_q(t: f64) -> f64 {
    3.0 + 1.0 / (1.0 + 10.0 * t * t) + t.powi(3) * (5.0 * t).cos()
}

/// Fits `q` on `[a, b]` to `tol` and derives `q'`, `q''` and `p`.
pub fn make_problem<F>(q: F, lambda: f64, a: f64, b: f64, tol: f64) -> Result<KummerProblem>
where
    F: Fn(f64) -> f64,
{
    let qs = ChebSeries::fit(&q, a, b, tol, MAX_FIT_ORDER)?;
    // reject sign changes the fit might have smoothed over
    if let Some((t, v)) = cheb::uniform_points(a, b, DENSE_SAMPLES)
        .map(|t| (t, q(t)))
        .find(|&(_, v)| !(v > 0.0))
    {
        return Err(Error::NonPositiveQ { t, value: v });
    }
    KummerProblem::from_series(qs, lambda, tol)
}

/// Schwarzian derivative `x'''/x' - 3/2 (x''/x')^2`.
pub fn schwarzian(x: &ChebSeries) -> Result<ChebSeries> {
    let (a, b) = x.interval();
    let d1 = x.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let scale = d1.sup_norm(DENSE_SAMPLES).max(f64::MIN_POSITIVE);
    for t in cheb::uniform_points(a, b, DENSE_SAMPLES).chain(cheb::nodes(a, b, x.order().max(2))) {
        if d1.eval_unchecked(t).abs() <= 1e-12 * scale {
            return Err(Error::VanishingDerivative { t });
        }
    }
    ChebSeries::fit_scaled(
        |t| {
            let g = d1.eval_unchecked(t);
            let ratio = d2.eval_unchecked(t) / g;
            d3.eval_unchecked(t) / g - 1.5 * ratio * ratio
        },
        a,
        b,
        1e-14,
        1.0,
        MAX_FIT_ORDER,
    )
}

/// Diagnostics of one Newton update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonStepReport {
    /// Sup of the residual `f_n` at the collocation nodes.
    pub f_norm: f64,
    /// Sup of the accepted (truncated) update.
    pub h0_norm: f64,
    /// Sup of the discarded high-order tail.
    pub h1_estimate: f64,
}

/// Settings for [`solve_kummer_log_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Accepted residual, relative to `4 lambda^2`.
    pub tol: f64,
    pub max_iters: usize,
    pub filter_margin: usize,
    /// Collocation order; raised automatically when `q` needs more modes.
    pub grid: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iters: 8,
            filter_margin: DEFAULT_FILTER_MARGIN,
            grid: DEFAULT_GRID,
        }
    }
}

/// Accepted solution of the logarithm form.
#[derive(Debug, Clone)]
pub struct LogPhase {
    pub r: ChebSeries,
    /// Sup of `|r'' - r'^2/4 + 4 lambda^2 (e^r - q)|` over a dense sample.
    pub residual_sup: f64,
    pub newton_iters: usize,
    pub history: Vec<f64>,
    pub reports: Vec<NewtonStepReport>,
}

impl LogPhase {
    /// Residual divided by the natural scale `4 lambda^2`.
    pub fn normalized_residual(&self, lambda: f64) -> f64 {
        self.residual_sup / (4.0 * lambda * lambda)
    }
}

/// Residual of the logarithm form sampled on a dense uniform grid.
pub fn log_residual(problem: &KummerProblem, r: &ChebSeries) -> f64 {
    let (a, b) = problem.interval();
    let rp = r.derivative();
    let rpp = rp.derivative();
    let l4 = 4.0 * problem.lambda * problem.lambda;
    cheb::uniform_points(a, b, DENSE_SAMPLES)
        .map(|t| {
            let (rv, d1, d2) = (r.eval_unchecked(t), rp.eval_unchecked(t), rpp.eval_unchecked(t));
            (d2 - 0.25 * d1 * d1 + l4 * (rv.exp() - problem.q.eval_unchecked(t))).abs()
        })
        .fold(0.0, f64::max)
}

/// WKB starting guess `r0 = log q`.
pub fn initial_guess(problem: &KummerProblem) -> Result<ChebSeries> {
    let (a, b) = problem.interval();
    let q = &problem.q;
    ChebSeries::fit_scaled(|t| q.eval_unchecked(t).ln(), a, b, problem.tol.min(1e-14), 1.0, MAX_FIT_ORDER)
}

/// How the two rows at the interval ends are used in the collocation system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndRows {
    /// Zero-slope conditions `h'(a) = h'(b) = 0`.
    Neumann,
    /// The linearized equation is imposed at the end nodes as well.
    Collocated,
}

/// Discretization chosen for a problem: grid order, end rows and the
/// filter cutoff applied to each update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NewtonPlan {
    pub grid: usize,
    pub end_rows: EndRows,
    pub cutoff: usize,
}

/// Total phase change `lambda * sqrt(max q) * (b - a)` of the oscillatory
/// solutions over the interval.
pub fn oscillation_count(problem: &KummerProblem) -> f64 {
    let (a, b) = problem.interval();
    let qmax = cheb::uniform_points(a, b, DENSE_SAMPLES)
        .map(|t| problem.q.eval_unchecked(t))
        .fold(0.0, f64::max);
    problem.lambda * qmax.sqrt() * (b - a)
}

/// Picks the discretization.
///
/// When the oscillatory solutions fit on at most twice the default grid,
/// the update is solved with zero-slope ends on a grid just large enough to
/// resolve them and nothing is filtered. Otherwise the grid stays at `grid`,
/// the equation is collocated at the end nodes too, and the update is
/// truncated above `order(q) + filter_margin`. Zero-slope rows on an
/// under-resolved grid excite boundary modes of the discrete operator that
/// the filter does not remove.
pub fn plan(problem: &KummerProblem, grid: usize, filter_margin: usize) -> NewtonPlan {
    let omega = oscillation_count(problem);
    let need_q = 2 * problem.q.order();
    if 1.5 * omega <= (2 * grid) as f64 {
        let mut n = 64;
        while (n as f64) < 1.5 * omega || n < need_q {
            n *= 2;
        }
        NewtonPlan {
            grid: n,
            end_rows: EndRows::Neumann,
            cutoff: n,
        }
    } else {
        let cutoff = problem.default_cutoff(filter_margin);
        let mut n = grid.max(16);
        while n < need_q || n < 2 * cutoff {
            n *= 2;
        }
        NewtonPlan {
            grid: n,
            end_rows: EndRows::Collocated,
            cutoff,
        }
    }
}

/// One Newton update of `r_n` with zero-slope end conditions, solved on
/// the default grid (or larger when `q` or the cutoff need it).
pub fn newton_step(
    problem: &KummerProblem,
    r_n: &ChebSeries,
    filter_cutoff: usize,
) -> Result<(ChebSeries, NewtonStepReport)> {
    let mut n = DEFAULT_GRID;
    while n < 2 * problem.q.order().max(r_n.order()).max(filter_cutoff) {
        n *= 2;
    }
    let plan = NewtonPlan {
        grid: n,
        end_rows: EndRows::Neumann,
        cutoff: filter_cutoff,
    };
    newton_step_with(problem, r_n, &plan)
}

/// Newton update on `plan.grid + 1` Chebyshev extrema.
pub fn newton_step_with(
    problem: &KummerProblem,
    r_n: &ChebSeries,
    plan: &NewtonPlan,
) -> Result<(ChebSeries, NewtonStepReport)> {
    let (a, b) = problem.interval();
    let n = plan.grid;
    if r_n.order() > n {
        return Err(Error::NotResolved { max_order: n });
    }
    let l4 = 4.0 * problem.lambda * problem.lambda;

    let rp_s = r_n.derivative();
    let rpp_s = rp_s.derivative();
    let r = r_n.with_order(n).values_at_nodes();
    let rp = rp_s.with_order(n).values_at_nodes();
    let rpp = rpp_s.with_order(n).values_at_nodes();
    let q = problem.q.with_order(n).values_at_nodes();

    let f: Vec<f64> = (0..=n)
        .map(|j| -rpp[j] + 0.25 * rp[j] * rp[j] - l4 * (r[j].exp() - q[j]))
        .collect();
    let f_norm = sup_abs(&f);
    if f_norm == 0.0 {
        let report = NewtonStepReport {
            f_norm: 0.0,
            h0_norm: 0.0,
            h1_estimate: 0.0,
        };
        return Ok((r_n.clone(), report));
    }

    let d = diff_matrix(a, b, n);
    let mut m = &d * &d;
    for i in 0..=n {
        for j in 0..=n {
            m[(i, j)] -= 0.5 * rp[i] * d[(i, j)];
        }
        m[(i, i)] += l4 * r[i].exp();
    }
    let mut rhs = DVector::from_vec(f);
    if plan.end_rows == EndRows::Neumann {
        for &i in &[0, n] {
            for j in 0..=n {
                m[(i, j)] = d[(i, j)];
            }
            rhs[i] = 0.0;
        }
    }

    let lu = m.lu();
    let (lo, hi) = lu
        .u()
        .diagonal()
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| (lo.min(v.abs()), hi.max(v.abs())));
    let pivot_ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(pivot_ratio > PIVOT_FLOOR) {
        return Err(Error::SingularLinearSystem { pivot_ratio });
    }
    let h = lu
        .solve(&rhs)
        .ok_or(Error::SingularLinearSystem { pivot_ratio })?;

    let mut coeffs = cheb::values_to_coeffs(h.as_slice());
    let keep = (plan.cutoff + 1).min(coeffs.len());
    let h1_estimate = if keep < coeffs.len() {
        let mut tail = coeffs.clone();
        tail[..keep].iter_mut().for_each(|c| *c = 0.0);
        sup_abs(&cheb::coeffs_to_values(&tail))
    } else {
        0.0
    };
    coeffs.truncate(keep);
    let h0 = ChebSeries::new(a, b, coeffs)?;
    let h0_norm = sup_abs(&h0.with_order(n).values_at_nodes());
    let report = NewtonStepReport {
        f_norm,
        h0_norm,
        h1_estimate,
    };
    let mut next = r_n.add(&h0)?;
    if plan.end_rows == EndRows::Neumann && plan.cutoff >= n {
        // unfiltered updates carry rounding noise in the top modes
        next = next.chopped(1e-16);
    }
    Ok((next, report))
}

fn sup_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Chebyshev differentiation matrix on the extrema of [`cheb::nodes`],
/// scaled to `[a, b]`.
fn diff_matrix(a: f64, b: f64, n: usize) -> DMatrix<f64> {
    let x = cheb::nodes(-1.0, 1.0, n);
    let c = |i: usize| if i == 0 || i == n { 2.0 } else { 1.0 };
    let mut d = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..=n {
        let mut row_sum = 0.0;
        for j in 0..=n {
            if i == j {
                continue;
            }
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            let v = c(i) / c(j) * sign / (x[i] - x[j]);
            d[(i, j)] = v;
            row_sum += v;
        }
        // negative-sum trick keeps constants in the null space
        d[(i, i)] = -row_sum;
    }
    d * (2.0 / (b - a))
}

/// Newton iteration from `log q` with default settings apart from `tol`
/// and `max_iters`.
pub fn solve_kummer_log(problem: &KummerProblem, tol: f64, max_iters: usize) -> Result<LogPhase> {
    solve_kummer_log_with(
        problem,
        &NewtonOptions {
            tol,
            max_iters,
            ..NewtonOptions::default()
        },
    )
}

/// Newton iteration from `log q`.
///
/// Stops once the residual is below `tol * 4 lambda^2`, or after two
/// iterations without improvement. The best iterate is returned.
pub fn solve_kummer_log_with(problem: &KummerProblem, opts: &NewtonOptions) -> Result<LogPhase> {
    let l4 = 4.0 * problem.lambda * problem.lambda;
    let target = opts.tol * l4;
    let plan = plan(problem, opts.grid, opts.filter_margin);
    let mut r = initial_guess(problem)?;
    let mut res = log_residual(problem, &r);
    let mut history = vec![res];
    let mut reports = Vec::new();
    let mut best = (res, r.clone());
    let mut iters = 0;
    let mut idle = 0;
    while best.0 > target && iters < opts.max_iters && idle < 2 {
        let (next, report) = newton_step_with(problem, &r, &plan)?;
        iters += 1;
        res = log_residual(problem, &next);
        history.push(res);
        reports.push(report);
        if res < best.0 {
            if res < 0.5 * best.0 {
                idle = 0;
            } else {
                idle += 1;
            }
            best = (res, next.clone());
        } else {
            idle += 1;
        }
        r = next;
    }
    let (residual_sup, r) = best;
    if !(residual_sup <= target) {
        return Err(Error::NoConvergence { history });
    }
    Ok(LogPhase {
        r: r.chopped(1e-16),
        residual_sup,
        newton_iters: iters,
        history,
        reports,
    })
}

/// A phase function `alpha` with `alpha' > 0` on the problem interval.
#[derive(Debug, Clone)]
pub struct PhaseFunction {
    pub alpha: ChebSeries,
    pub alpha_prime: ChebSeries,
    alpha_second: ChebSeries,
    pub problem: KummerProblem,
}

/// `u = cos(alpha)/sqrt(alpha')` and `v = sin(alpha)/sqrt(alpha')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    pub u: f64,
    pub v: f64,
}

/// Basis values together with their first derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisJet {
    pub u: f64,
    pub v: f64,
    pub du: f64,
    pub dv: f64,
}

/// `alpha' = lambda exp(r/2)`, `alpha = int_{t0} alpha' + alpha0`.
pub fn build_phase(logphase: &LogPhase, problem: &KummerProblem, t0: f64, alpha0: f64) -> Result<PhaseFunction> {
    let (a, b) = problem.interval();
    let r = &logphase.r;
    let lambda = problem.lambda;
    let alpha_prime = ChebSeries::fit(|t| lambda * (0.5 * r.eval_unchecked(t)).exp(), a, b, 1e-15, MAX_FIT_ORDER)
        .or_else(|_| ChebSeries::fit(|t| lambda * (0.5 * r.eval_unchecked(t)).exp(), a, b, 1e-13, MAX_FIT_ORDER))?;
    PhaseFunction::from_derivative(alpha_prime, problem.clone(), t0, alpha0)
}

impl PhaseFunction {
    /// Phase with the given derivative, anchored by `alpha(t0) = alpha0`.
    pub fn from_derivative(alpha_prime: ChebSeries, problem: KummerProblem, t0: f64, alpha0: f64) -> Result<Self> {
        let alpha = alpha_prime.antiderivative(t0)?.add(&ChebSeries::constant(
            alpha_prime.interval().0,
            alpha_prime.interval().1,
            alpha0,
        )?)?;
        let alpha_second = alpha_prime.derivative();
        let (a, b) = alpha_prime.interval();
        if let Some(t) = cheb::uniform_points(a, b, DENSE_SAMPLES).find(|&t| !(alpha_prime.eval_unchecked(t) > 0.0)) {
            return Err(Error::VanishingDerivative { t });
        }
        Ok(Self {
            alpha,
            alpha_prime,
            alpha_second,
            problem,
        })
    }

    /// Wraps an arbitrary `alpha`, e.g. to measure how far it is from a phase.
    pub fn from_alpha(alpha: ChebSeries, problem: KummerProblem) -> Result<Self> {
        let alpha_prime = alpha.derivative();
        let alpha_second = alpha_prime.derivative();
        let (a, b) = alpha.interval();
        if let Some(t) = cheb::uniform_points(a, b, DENSE_SAMPLES).find(|&t| !(alpha_prime.eval_unchecked(t) > 0.0)) {
            return Err(Error::VanishingDerivative { t });
        }
        Ok(Self {
            alpha,
            alpha_prime,
            alpha_second,
            problem,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        self.alpha.interval()
    }

    pub fn lambda(&self) -> f64 {
        self.problem.lambda
    }

    pub fn alpha_second(&self) -> &ChebSeries {
        &self.alpha_second
    }

    pub fn basis(&self, t: f64) -> Result<BasisPair> {
        self.check(t)?;
        Ok(self.basis_unchecked(t))
    }

    #[inline]
    pub fn basis_unchecked(&self, t: f64) -> BasisPair {
        let al = self.alpha.eval_unchecked(t);
        let ap = self.alpha_prime.eval_unchecked(t);
        let s = ap.sqrt().recip();
        let (sin, cos) = al.sin_cos();
        BasisPair { u: cos * s, v: sin * s }
    }

    /// Values and derivatives of the basis at `t`.
    pub fn jet(&self, t: f64) -> Result<BasisJet> {
        self.check(t)?;
        let al = self.alpha.eval_unchecked(t);
        let ap = self.alpha_prime.eval_unchecked(t);
        let app = self.alpha_second.eval_unchecked(t);
        let (sin, cos) = al.sin_cos();
        let root = ap.sqrt();
        let k = 0.5 * app / (ap * root);
        Ok(BasisJet {
            u: cos / root,
            v: sin / root,
            du: -sin * root - cos * k,
            dv: cos * root - sin * k,
        })
    }

    fn check(&self, t: f64) -> Result<()> {
        if !self.alpha.contains(t) {
            let (a, b) = self.interval();
            return Err(Error::OutOfDomain { t, a, b });
        }
        Ok(())
    }
}

/// Free-function form of [`PhaseFunction::basis`].
pub fn basis_eval(phase: &PhaseFunction, t: f64) -> Result<BasisPair> {
    phase.basis(t)
}

/// Sup of `|alpha'^2 - lambda^2 q + alpha'''/(2 alpha') - 3/4 (alpha''/alpha')^2| / lambda^2`.
pub fn kummer_residual(phase: &PhaseFunction) -> f64 {
    let (a, b) = phase.interval();
    let l2 = phase.lambda() * phase.lambda();
    let d3 = phase.alpha_second.derivative();
    cheb::uniform_points(a, b, DENSE_SAMPLES)
        .map(|t| {
            let ap = phase.alpha_prime.eval_unchecked(t);
            let app = phase.alpha_second.eval_unchecked(t);
            let appp = d3.eval_unchecked(t);
            let q = phase.problem.q.eval_unchecked(t);
            let ratio = app / ap;
            (ap * ap - l2 * q + 0.5 * appp / ap - 0.75 * ratio * ratio).abs() / l2
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Instant;

    fn sample_q(t: f64) -> f64 {
        3.0 + 1.0 / (1.0 + 10.0 * t * t) + t.powi(3) * (5.0 * t).cos()
    }

    #[test]
    fn constant_q_has_zero_p() {
        let pr = make_problem(|_| 1.0, 7.0, -1.0, 1.0, 1e-14).unwrap();
        assert!(pr.p.sup_norm(101) < 1e-15);
    }

    #[test]
    fn linear_q_p_value() {
        let pr = make_problem(|t| t, 5.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((pr.p.eval(1.0).unwrap() - 1.25).abs() < 1e-12);
        for &t in &[1.3, 1.7, 2.0] {
            assert!((pr.p.eval(t).unwrap() - 1.25 / (t * t * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_q_p_matches_hand_derivatives() {
        let pr = make_problem(sample_q, 1000.0, -1.0, 1.0, 1e-14).unwrap();
        // hand-differentiated q' and q''
        let qp = |t: f64| {
            let s = 1.0 + 10.0 * t * t;
            -20.0 * t / (s * s) + 3.0 * t * t * (5.0 * t).cos() - 5.0 * t.powi(3) * (5.0 * t).sin()
        };
        let qpp = |t: f64| {
            let s = 1.0 + 10.0 * t * t;
            -20.0 / (s * s) + 800.0 * t * t / (s * s * s) + 6.0 * t * (5.0 * t).cos()
                - 30.0 * t * t * (5.0 * t).sin()
                - 25.0 * t.powi(3) * (5.0 * t).cos()
        };
        for &t in &[-0.9, -0.3, 0.0, 0.4, 0.77] {
            let want = p_formula(sample_q(t), qp(t), qpp(t));
            assert!((pr.p.eval(t).unwrap() - want).abs() < 1e-9, "t={t}");
        }
        // q(0) = 4, q'(0) = 0, q''(0) = -20
        assert!((pr.p.eval(0.0).unwrap() - 20.0 / 16.0).abs() < 1e-9);
    }

    #[test]
    fn nonpositive_q_rejected() {
        let e = make_problem(|t| t, 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, Error::NonPositiveQ { .. }));
    }

    #[test]
    fn schwarzian_examples() {
        let x = ChebSeries::fit(|t| t, -1.0, 1.0, 1e-14, 64).unwrap();
        assert!(schwarzian(&x).unwrap().sup_norm(50) < 1e-13);
        let e = ChebSeries::fit(f64::exp, -1.0, 1.0, 1e-15, 128).unwrap();
        let s = schwarzian(&e).unwrap();
        for &t in &[-0.8, 0.0, 0.5] {
            assert!((s.eval(t).unwrap() + 0.5).abs() < 1e-10);
        }
        let flat = ChebSeries::fit(|t| t * t, -1.0, 1.0, 1e-14, 64).unwrap();
        assert!(matches!(schwarzian(&flat), Err(Error::VanishingDerivative { .. })));
    }

    #[test]
    fn p_is_minus_two_over_q_times_schwarzian() {
        let pr = make_problem(sample_q, 1.0, -1.0, 1.0, 1e-14).unwrap();
        let root = ChebSeries::fit(|t| pr.q.eval_unchecked(t).sqrt(), -1.0, 1.0, 1e-15, 4096).unwrap();
        let x = root.antiderivative(0.0).unwrap();
        let s = schwarzian(&x).unwrap();
        for i in 0..=40 {
            let t = -1.0 + i as f64 / 20.0;
            let lhs = pr.p.eval(t).unwrap();
            let rhs = -2.0 / pr.q.eval(t).unwrap() * s.eval(t).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "t={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn constant_q_newton_is_trivial() {
        let pr = make_problem(|_| 1.0, 50.0, -1.0, 1.0, 1e-14).unwrap();
        let r0 = initial_guess(&pr).unwrap();
        let (r1, rep) = newton_step(&pr, &r0, 20).unwrap();
        // zero up to the rounding of e^{log q} - q, scaled by 4 lambda^2
        assert!(rep.f_norm < 1e-10, "{rep:?}");
        assert!(rep.h0_norm < 1e-15 && rep.h1_estimate < 1e-15, "{rep:?}");
        assert!(r1.sup_norm(50) < 1e-15);
        let lp = solve_kummer_log(&pr, 1e-12, 8).unwrap();
        assert!(lp.newton_iters <= 1);
        assert!(lp.r.sup_norm(100) < 1e-15);
        assert!(lp.normalized_residual(50.0) < 1e-15);
    }

    #[test]
    fn first_residual_has_no_lambda_term() {
        let pr = make_problem(sample_q, 1000.0, -1.0, 1.0, 1e-14).unwrap();
        let r0 = initial_guess(&pr).unwrap();
        let (_, rep) = newton_step(&pr, &r0, pr.default_cutoff(16)).unwrap();
        let n = DEFAULT_GRID;
        let d1 = r0.derivative();
        let d2 = d1.derivative();
        let v1 = d1.with_order(n).values_at_nodes();
        let v2 = d2.with_order(n).values_at_nodes();
        let want = v1
            .iter()
            .zip(&v2)
            .map(|(a, b)| (-b + 0.25 * a * a).abs())
            .fold(0.0, f64::max);
        // e^{log q} - q only differs by rounding, amplified by 4 lambda^2
        assert!((rep.f_norm - want).abs() <= 1e-6 * want.max(1.0), "{} vs {want}", rep.f_norm);
    }

    #[test]
    fn sample_q_newton_converges() {
        let pr = make_problem(sample_q, 1000.0, -1.0, 1.0, 1e-14).unwrap();
        let start = Instant::now();
        let lp = solve_kummer_log(&pr, 1e-10, 8).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        assert!(lp.newton_iters <= 8);
        assert!(lp.normalized_residual(1000.0) <= 1e-10);
        assert!(elapsed < 5.0, "{elapsed}");
        // residual drops monotonically until it hits the floor
        for w in lp.history.windows(2) {
            assert!(w[1] <= w[0] || w[1] < 1e-9 * 4e6, "{:?}", lp.history);
        }
        assert!(lp.reports[0].h1_estimate < lp.reports[0].h0_norm);
    }

    #[test]
    fn log_phase_is_nonoscillatory() {
        let pr = make_problem(sample_q, 1000.0, -1.0, 1.0, 1e-14).unwrap();
        let lp = solve_kummer_log(&pr, 1e-12, 8).unwrap();
        let c = lp.r.coeffs();
        let cmax = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tail = c.iter().skip(pr.q.order() + 20).fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(tail <= 1e-10 * cmax, "tail {tail:e}");
        assert!(c.len() <= 500);
    }

    #[test]
    fn build_phase_examples() {
        for &(qv, want) in &[(1.0, 10.0), (4.0, 20.0)] {
            let pr = make_problem(move |_| qv, 10.0, -1.0, 1.0, 1e-14).unwrap();
            let lp = solve_kummer_log(&pr, 1e-12, 8).unwrap();
            let ph = build_phase(&lp, &pr, 0.0, 0.0).unwrap();
            for &t in &[-1.0, -0.3, 0.0, 0.6, 1.0] {
                assert!((ph.alpha.eval(t).unwrap() - want * t).abs() < 1e-12);
            }
            assert!(kummer_residual(&ph) < 1e-14);
        }
    }

    #[test]
    fn sample_phase_is_consistent() {
        let pr = make_problem(sample_q, 1000.0, -1.0, 1.0, 1e-14).unwrap();
        let lp = solve_kummer_log(&pr, 1e-12, 8).unwrap();
        let ph = build_phase(&lp, &pr, 0.0, 0.0).unwrap();
        let delta0 = lp.r.eval(0.0).unwrap() - 4.0_f64.ln();
        let want = 1000.0 * 2.0 * (0.5 * delta0).exp();
        assert!((ph.alpha_prime.eval(0.0).unwrap() - want).abs() < 1e-9 * want);
        assert!(delta0.abs() < 1e-4);
        // alpha''/alpha' against a centered difference of alpha'
        let h = 1e-4;
        for &t in &[-0.7, 0.1, 0.55] {
            let fd = (ph.alpha_prime.eval(t + h).unwrap() - ph.alpha_prime.eval(t - h).unwrap()) / (2.0 * h);
            let ap = ph.alpha_prime.eval(t).unwrap();
            let spectral = ph.alpha_second().eval(t).unwrap() / ap;
            assert!((fd / ap - spectral).abs() < 1e-6);
        }
        assert!(kummer_residual(&ph) <= 1e-10);
    }

    #[test]
    fn basis_examples() {
        let pr = make_problem(|_| 1.0, 1.0, -2.0, 2.0, 1e-14).unwrap();
        let lp = solve_kummer_log(&pr, 1e-12, 8).unwrap();
        let ph = build_phase(&lp, &pr, 0.0, 0.0).unwrap();
        let b0 = basis_eval(&ph, 0.0).unwrap();
        assert!((b0.u - 1.0).abs() < 1e-14 && b0.v.abs() < 1e-14);
        let b1 = basis_eval(&ph, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(b1.u.abs() < 1e-14 && (b1.v - 1.0).abs() < 1e-14);
        assert!(matches!(basis_eval(&ph, 3.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn residual_flags_wrong_phase() {
        let pr = make_problem(|_| 1.0, 3.0, -1.0, 1.0, 1e-14).unwrap();
        let exact = ChebSeries::fit(|t| 3.0 * t, -1.0, 1.0, 1e-15, 64).unwrap();
        let ph = PhaseFunction::from_alpha(exact, pr.clone()).unwrap();
        assert!(kummer_residual(&ph) < 1e-14);
        let bent = ChebSeries::fit(|t| 3.0 * t + 0.1 * t.sin(), -1.0, 1.0, 1e-15, 64).unwrap();
        let ph = PhaseFunction::from_alpha(bent, pr).unwrap();
        assert!(kummer_residual(&ph) > 1e-3);
    }

    #[test]
    fn half_order_bessel_gives_flat_phase() {
        // lambda = 1/2 makes q = 1 - (lambda^2 - 1/4)/t^2 identically one
        let lambda = 0.5;
        let q = move |t: f64| 1.0 - (lambda * lambda - 0.25) / (t * t);
        let pr = make_problem(q, lambda, 1.0, 10.0, 1e-14).unwrap();
        let lp = solve_kummer_log(&pr, 1e-12, 8).unwrap();
        assert!(lp.r.sup_norm(100) < 1e-14);
        let ph = build_phase(&lp, &pr, 1.0, 0.0).unwrap();
        assert!((ph.alpha_prime.eval(4.0).unwrap() - 0.5).abs() < 1e-14);
    }
}
