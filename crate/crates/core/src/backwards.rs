//! Backward error: reconstructing a coefficient from a perturbed `p`, and
//! measuring how a perturbation of `q` moves the solutions of
//! `z'' + lambda^2 q z = 0`.
//!
//! All reference solutions come from an adaptive classical Runge-Kutta
//! integrator with step-doubling error control and Richardson extrapolation.

use crate::cheb::{self, ChebSeries};
use crate::error::{Error, Result};
use crate::phase::{p_formula, PhaseFunction};

/// Default local tolerance of the reference integrator.
pub const DEFAULT_ODE_TOL: f64 = 1e-13;
const MAX_STEPS: usize = 50_000_000;
const MAX_Q_ORDER: usize = 4096;
const DENSE: usize = 4001;
/// `solve_q_from_p` reports blow-up once `q` leaves `(0, Q_CEILING)`.
const Q_CEILING: f64 = 1e150;

/// Constants of the backward-error theorem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackwardErrorParams {
    pub eta1: f64,
    pub eta2: f64,
    pub k: f64,
    pub epsilon: f64,
}

impl BackwardErrorParams {
    /// `eta1 <= q <= eta2` and `|p|, |q'| <= eta2`. Equal bounds are allowed
    /// so that constant coefficients can be described.
    pub fn new(eta1: f64, eta2: f64, epsilon: f64) -> Result<Self> {
        if !(eta1 > 0.0 && eta2 >= eta1 && eta2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < eta1 <= eta2, got {eta1}, {eta2}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
        }
        let r = eta2 / eta1;
        let k = 20.0 * r * r + 8.0 * eta2 * eta2 + 10.0 * r + 1.0;
        Ok(Self { eta1, eta2, k, epsilon })
    }

    /// Smallest admissible bounds for `q` on its interval.
    pub fn for_coefficient(q: &ChebSeries, epsilon: f64) -> Result<Self> {
        let b = CoefficientBounds::of(q);
        Self::new(b.eta1, b.eta2, epsilon)
    }

    /// The theorem needs `epsilon < lambda exp(eta2^{3/4} / 4)`.
    pub fn epsilon_admissible(&self, lambda: f64) -> bool {
        self.epsilon < lambda * growth(self.eta2)
    }

    /// Allowed `sup |q - q_b|` for relative solution error `epsilon`.
    pub fn q_tolerance(&self, lambda: f64) -> f64 {
        0.5 * self.eta1 / lambda / growth(self.eta2) * self.epsilon
    }

    /// Allowed `sup |p - p_b|`.
    pub fn p_tolerance(&self, lambda: f64) -> f64 {
        self.q_tolerance(lambda) * (-self.k).exp()
    }
}

/// `exp(eta2^{3/4} / 4)`.
fn growth(eta2: f64) -> f64 {
    (eta2.powf(0.75) / 4.0).exp()
}

/// Relative solution error guaranteed by a coefficient perturbation of size
/// `dq`; the inverse of [`BackwardErrorParams::q_tolerance`].
pub fn epsilon_for(eta1: f64, eta2: f64, lambda: f64, dq: f64) -> f64 {
    2.0 * lambda * dq / eta1 * growth(eta2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct CoefficientBounds {
    eta1: f64,
    eta2: f64,
}

impl CoefficientBounds {
    fn of(q: &ChebSeries) -> Self {
        let (a, b) = q.interval();
        let qp = q.derivative();
        let qpp = qp.derivative();
        let mut eta1 = f64::INFINITY;
        let mut eta2: f64 = 0.0;
        for t in cheb::uniform_points(a, b, DENSE).chain(cheb::nodes(a, b, q.order())) {
            let (v, d1, d2) = (q.eval_unchecked(t), qp.eval_unchecked(t), qpp.eval_unchecked(t));
            eta1 = eta1.min(v);
            eta2 = eta2
                .max(v)
                .max(d1.abs())
                .max((d1 / v).abs())
                .max(p_formula(v, d1, d2).abs());
        }
        Self { eta1, eta2 }
    }
}

/// Adaptive RK4 with step doubling. The state advances in either direction.
struct Stepper<const N: usize, F> {
    rhs: F,
    t: f64,
    y: [f64; N],
    h: f64,
    tol: f64,
    steps: usize,
}

impl<const N: usize, F> Stepper<N, F>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    fn new(rhs: F, t: f64, y: [f64; N], h: f64, tol: f64) -> Self {
        Self { rhs, t, y, h: h.abs(), tol, steps: 0 }
    }

    fn rk4(&self, t: f64, y: &[f64; N], h: f64) -> [f64; N] {
        let f = &self.rhs;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
        let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
        let k4 = f(t + h, &axpy(y, h, &k3));
        let mut out = *y;
        for i in 0..N {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }

    /// Integrates to `target`, checking `guard` after every accepted step.
    fn advance<G>(&mut self, target: f64, guard: &G) -> Result<[f64; N]>
    where
        G: Fn(f64, &[f64; N]) -> Result<()>,
    {
        let dir = if target >= self.t { 1.0 } else { -1.0 };
        while (target - self.t) * dir > 0.0 {
            let remaining = (target - self.t).abs();
            let last = self.h >= remaining;
            let h = dir * if last { remaining } else { self.h };
            let big = self.rk4(self.t, &self.y, h);
            let half = self.rk4(self.t, &self.y, 0.5 * h);
            let small = self.rk4(self.t + 0.5 * h, &half, 0.5 * h);
            let slope = (self.rhs)(self.t, &self.y);
            let mut err: f64 = 0.0;
            for i in 0..N {
                let scale = self.y[i].abs().max(small[i].abs()) + (h * slope[i]).abs() + 1e-300;
                err = err.max((small[i] - big[i]).abs() / scale);
            }
            err /= self.tol;
            if !err.is_finite() {
                return Err(Error::IntegratorFailure {
                    t: self.t,
                    reason: "non-finite error estimate".into(),
                });
            }
            if err <= 1.0 {
                for i in 0..N {
                    self.y[i] = small[i] + (small[i] - big[i]) / 15.0;
                }
                self.t = if last { target } else { self.t + h };
                self.steps += 1;
                guard(self.t, &self.y)?;
                // a shortened final step says nothing about the natural size
                if !last {
                    self.h *= if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).min(5.0) };
                }
            } else {
                self.h *= (0.9 * err.powf(-0.25)).max(0.1);
            }
            if self.steps > MAX_STEPS {
                return Err(Error::IntegratorFailure {
                    t: self.t,
                    reason: format!("more than {MAX_STEPS} steps"),
                });
            }
            if self.h < 1e-15 * self.t.abs().max(1.0) {
                return Err(Error::IntegratorFailure {
                    t: self.t,
                    reason: "step size underflow".into(),
                });
            }
        }
        Ok(self.y)
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += h * k[i];
    }
    out
}

fn no_guard<const N: usize>(_: f64, _: &[f64; N]) -> Result<()> {
    Ok(())
}

/// Initial step for an oscillator of frequency `omega` over an interval of
/// length `len`.
fn first_step(omega: f64, len: f64) -> f64 {
    (0.01 / omega.max(1.0)).min(0.01 * len)
}

/// Integrates `q'' = (5/4) q'^2 / q - q^2 p_b` from `(q0, q0p)` at the left
/// end of the interval of `p_b` and returns `q_b` as a Chebyshev series.
pub fn solve_q_from_p(p_b: &ChebSeries, q0: f64, q0p: f64) -> Result<ChebSeries> {
    if !(q0 > 0.0 && q0.is_finite() && q0p.is_finite()) {
        return Err(Error::InvalidArgument(format!("need q0 > 0, got {q0}")));
    }
    let (a, b) = p_b.interval();
    let rhs = |t: f64, y: &[f64; 2]| [y[1], 1.25 * y[1] * y[1] / y[0] - y[0] * y[0] * p_b.eval_unchecked(t)];
    let guard = |t: f64, y: &[f64; 2]| {
        if y[0] > 0.0 && y[0] < Q_CEILING && y[1].is_finite() {
            Ok(())
        } else {
            Err(Error::BlowUp { t })
        }
    };
    let mut order = cheb::MIN_FIT_ORDER;
    loop {
        let mut stepper = Stepper::new(rhs, a, [q0, q0p], first_step(1.0, b - a), DEFAULT_ODE_TOL);
        // nodes are returned right to left
        let ts = cheb::nodes(a, b, order);
        let mut values = vec![0.0; ts.len()];
        for (i, &t) in ts.iter().enumerate().rev() {
            // the step size only collapses at a singularity of q
            values[i] = match stepper.advance(t, &guard) {
                Ok(y) => y[0],
                Err(Error::IntegratorFailure { t, .. }) => return Err(Error::BlowUp { t }),
                Err(e) => return Err(e),
            };
        }
        let s = ChebSeries::from_values(a, b, &values)?;
        if s.is_resolved(1e-12) {
            return Ok(s.chopped(1e-15));
        }
        if order >= MAX_Q_ORDER {
            return Err(Error::NotResolved { max_order: MAX_Q_ORDER });
        }
        order *= 2;
    }
}

/// Outcome of [`perturbation_bound_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationCheck {
    /// `sup |z - z0|` on the sample grid.
    pub sup_err: f64,
    /// `epsilon * sup |z|`.
    pub bound: f64,
    pub ok: bool,
    /// Relative error guaranteed for `dq` by [`epsilon_for`].
    pub epsilon: f64,
    pub dq: f64,
    pub eta1: f64,
    pub eta2: f64,
    /// Largest ratio of the transformed error `q^{1/4} (z0 - z)` to its
    /// Gronwall envelope; at most 1 when the envelope holds.
    pub gronwall_ratio: f64,
}

/// Solves `z'' + lambda^2 q z = 0` and `z0'' + lambda^2 q_b z0 = 0` from the
/// same data at the left end and compares them with the perturbation lemma.
///
/// The Gronwall envelope checked here is
/// `(lambda dq |z|_inf / eta1^{3/4}) x exp((lambda dq / eta1 + eta2 / 4) x)`
/// in the Liouville-Green variable `x = int sqrt(q)`.
pub fn perturbation_bound_check(
    q: &ChebSeries,
    q_b: &ChebSeries,
    lambda: f64,
    z_init: (f64, f64),
) -> Result<PerturbationCheck> {
    if q.interval() != q_b.interval() {
        return Err(Error::InvalidArgument("q and q_b live on different intervals".into()));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let (a, b) = q.interval();
    let bounds = CoefficientBounds::of(q);
    if !(bounds.eta1 > 0.0) {
        return Err(Error::NonPositiveQ { t: a, value: bounds.eta1 });
    }
    let dq = cheb::uniform_points(a, b, DENSE)
        .chain(cheb::nodes(a, b, q.order().max(q_b.order())))
        .map(|t| (q.eval_unchecked(t) - q_b.eval_unchecked(t)).abs())
        .fold(0.0, f64::max);

    let l2 = lambda * lambda;
    let rhs = |t: f64, y: &[f64; 4]| {
        [
            y[1],
            -l2 * q.eval_unchecked(t) * y[0],
            y[3],
            -l2 * q_b.eval_unchecked(t) * y[2],
        ]
    };
    let omega = lambda * bounds.eta2.sqrt();
    let samples = DENSE.max((20.0 * omega * (b - a)) as usize + 1);
    let mut stepper = Stepper::new(
        rhs,
        a,
        [z_init.0, z_init.1, z_init.0, z_init.1],
        first_step(omega, b - a),
        DEFAULT_ODE_TOL,
    );
    let ts: Vec<f64> = cheb::uniform_points(a, b, samples).collect();
    let mut diffs = Vec::with_capacity(samples);
    let mut zmax: f64 = 0.0;
    for &t in &ts {
        let y = stepper.advance(t, &no_guard)?;
        zmax = zmax.max(y[0].abs());
        diffs.push(y[2] - y[0]);
    }
    let sup_err = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let epsilon = epsilon_for(bounds.eta1, bounds.eta2, lambda, dq);
    let bound = epsilon * zmax;

    let root_q = ChebSeries::fit(|t| q.eval_unchecked(t).sqrt(), a, b, 1e-15, MAX_Q_ORDER)?;
    let x_of = root_q.antiderivative(a)?;
    let amp = lambda * dq * zmax / bounds.eta1.powf(0.75);
    let rate = lambda * dq / bounds.eta1 + bounds.eta2 / 4.0;
    let gronwall_ratio = ts
        .iter()
        .zip(&diffs)
        .filter(|(_, d)| **d != 0.0)
        .map(|(&t, d)| {
            let x = x_of.eval_unchecked(t);
            let phi = q.eval_unchecked(t).powf(0.25) * d.abs();
            phi / (amp * x * (rate * x).exp())
        })
        .fold(0.0, f64::max);

    Ok(PerturbationCheck {
        sup_err,
        bound,
        ok: sup_err <= bound,
        epsilon,
        dq,
        eta1: bounds.eta1,
        eta2: bounds.eta2,
        gronwall_ratio,
    })
}

/// Values and slopes of two independent true solutions at one point.
pub type BasisSample = [(f64, f64); 2];

/// Reference solutions of `y'' + lambda^2 q y = 0` by direct integration.
///
/// Samples are cheapest when requested in monotone order, since the
/// integration continues from the last requested point.
pub struct OdeOracle<'a> {
    q: &'a ChebSeries,
    lambda: f64,
    t: f64,
    y: [f64; 4],
    h: f64,
    tol: f64,
}

impl<'a> OdeOracle<'a> {
    /// Starts the two solutions from `init` at `t0`.
    pub fn new(q: &'a ChebSeries, lambda: f64, t0: f64, init: BasisSample, tol: f64) -> Result<Self> {
        if !q.contains(t0) {
            let (a, b) = q.interval();
            return Err(Error::OutOfDomain { t: t0, a, b });
        }
        let (a, b) = q.interval();
        let omega = lambda * q.sup_norm(DENSE).sqrt();
        Ok(Self {
            q,
            lambda,
            t: t0,
            y: [init[0].0, init[0].1, init[1].0, init[1].1],
            h: first_step(omega, b - a),
            tol,
        })
    }

    pub fn sample(&mut self, t: f64) -> Result<BasisSample> {
        if !self.q.contains(t) {
            let (a, b) = self.q.interval();
            return Err(Error::OutOfDomain { t, a, b });
        }
        let (q, l2) = (self.q, self.lambda * self.lambda);
        let rhs = move |s: f64, y: &[f64; 4]| {
            let w = -l2 * q.eval_unchecked(s);
            [y[1], w * y[0], y[3], w * y[2]]
        };
        let mut stepper = Stepper::new(rhs, self.t, self.y, self.h, self.tol);
        let y = stepper.advance(t, &no_guard)?;
        self.t = t;
        self.y = y;
        self.h = stepper.h;
        Ok([(y[0], y[1]), (y[2], y[3])])
    }
}

/// Largest relative deviation of the phase basis `u = cos(alpha)/sqrt(alpha')`,
/// `v = sin(alpha)/sqrt(alpha')` from the true solutions with the same value
/// and slope at the midpoint of the interval.
pub fn epsilon_approx_error<O>(phase: &PhaseFunction, mut oracle: O) -> Result<f64>
where
    O: FnMut(f64) -> Result<BasisSample>,
{
    let (a, b) = phase.interval();
    let mid = 0.5 * (a + b);
    let jet = phase.jet(mid)?;
    let [(y1, d1), (y2, d2)] = oracle(mid)?;
    let det = y1 * d2 - y2 * d1;
    if det == 0.0 || !det.is_finite() {
        return Err(Error::InvalidArgument("oracle solutions are not independent".into()));
    }
    // coefficients of the true solutions sharing the jet of u and of v
    let cu = ((jet.u * d2 - y2 * jet.du) / det, (y1 * jet.du - d1 * jet.u) / det);
    let cv = ((jet.v * d2 - y2 * jet.dv) / det, (y1 * jet.dv - d1 * jet.v) / det);

    let turns = (phase.alpha.eval_unchecked(b) - phase.alpha.eval_unchecked(a)).abs() / (2.0 * std::f64::consts::PI);
    let samples = DENSE.max((40.0 * turns) as usize + 1);
    let (mut eu, mut ev, mut su, mut sv) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in cheb::uniform_points(a, b, samples) {
        let [(y1, _), (y2, _)] = oracle(t)?;
        let bp = phase.basis_unchecked(t);
        let (tu, tv) = (cu.0 * y1 + cu.1 * y2, cv.0 * y1 + cv.1 * y2);
        eu = eu.max((bp.u - tu).abs());
        ev = ev.max((bp.v - tv).abs());
        su = su.max(tu.abs());
        sv = sv.max(tv.abs());
    }
    Ok((eu / su).max(ev / sv))
}

/// Whether `phase` is an `eps`-approximate phase function, judged against the
/// true solutions supplied by `oracle`.
pub fn epsilon_approx_check<O>(phase: &PhaseFunction, oracle: O, eps: f64) -> Result<bool>
where
    O: FnMut(f64) -> Result<BasisSample>,
{
    Ok(epsilon_approx_error(phase, oracle)? <= eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{build_phase, make_problem, solve_kummer_log};

    fn sample_q(t: f64) -> f64 {
        3.0 + 1.0 / (1.0 + 10.0 * t * t) + t.powi(3) * (5.0 * t).cos()
    }

    #[test]
    fn k_formula() {
        let p = BackwardErrorParams::new(1.0, 2.0, 1e-3).unwrap();
        assert_eq!(p.k, 133.0);
        assert!(BackwardErrorParams::new(2.0, 1.0, 1e-3).is_err());
        assert!(BackwardErrorParams::new(1.0, 2.0, 0.0).is_err());
        assert!(p.epsilon_admissible(1.0));
        let q_tol = p.q_tolerance(10.0);
        assert!((epsilon_for(1.0, 2.0, 10.0, q_tol) - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn rk_matches_closed_form() {
        let rhs = |_: f64, y: &[f64; 2]| [y[1], -1e4 * y[0]];
        let mut s = Stepper::new(rhs, 0.0, [1.0, 0.0], 1e-4, DEFAULT_ODE_TOL);
        let y = s.advance(1.0, &no_guard).unwrap();
        assert!((y[0] - 100f64.cos()).abs() < 1e-10, "{}", y[0] - 100f64.cos());
        let back = s.advance(0.0, &no_guard).unwrap();
        assert!((back[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn constant_q_from_zero_p() {
        let p = ChebSeries::constant(0.0, 1.0, 0.0).unwrap();
        let q = solve_q_from_p(&p, 1.0, 0.0).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert!((q.eval(t).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn q_round_trip() {
        let prob = make_problem(sample_q, 1.0, -1.0, 1.0, 1e-14).unwrap();
        let q0 = prob.q.eval(-1.0).unwrap();
        let q0p = prob.qp.eval(-1.0).unwrap();
        let qb = solve_q_from_p(&prob.p, q0, q0p).unwrap();
        let err = cheb::uniform_points(-1.0, 1.0, 2001)
            .map(|t| (qb.eval_unchecked(t) - sample_q(t)).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "err {err}");
    }

    #[test]
    fn q_depends_continuously_on_p() {
        let prob = make_problem(sample_q, 1.0, -1.0, 1.0, 1e-14).unwrap();
        let (q0, q0p) = (prob.q.eval(-1.0).unwrap(), prob.qp.eval(-1.0).unwrap());
        let bump = ChebSeries::constant(-1.0, 1.0, 1e-6).unwrap();
        let qb = solve_q_from_p(&prob.p.add(&bump).unwrap(), q0, q0p).unwrap();
        let d = cheb::uniform_points(-1.0, 1.0, 2001)
            .map(|t| (qb.eval_unchecked(t) - sample_q(t)).abs())
            .fold(0.0, f64::max);
        assert!(d > 1e-8 && d < 1e-4, "d {d}");
    }

    #[test]
    fn blow_up_is_reported() {
        let p = ChebSeries::constant(0.0, 10.0, 0.0).unwrap();
        // q'' = 5/4 q'^2 / q is solved by (1 - q0' t / 4)^{-4}, singular at t = 0.8
        match solve_q_from_p(&p, 1.0, 5.0) {
            Err(Error::BlowUp { t }) => assert!((t - 0.8).abs() < 1e-3, "t {t}"),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn identical_coefficients_give_zero_error() {
        let q = ChebSeries::fit(sample_q, 0.0, 1.0, 1e-15, 512).unwrap();
        let r = perturbation_bound_check(&q, &q, 50.0, (1.0, 0.0)).unwrap();
        assert_eq!(r.sup_err, 0.0);
        assert!(r.ok);
    }

    #[test]
    fn shifted_frequency_closed_form() {
        let lambda = 100.0;
        let q = ChebSeries::constant(0.0, 1.0, 1.0).unwrap();
        let mut errs = Vec::new();
        for dq in [1e-8, 5e-9] {
            let qb = ChebSeries::constant(0.0, 1.0, 1.0 + dq).unwrap();
            let r = perturbation_bound_check(&q, &qb, lambda, (1.0, 0.0)).unwrap();
            let exact = cheb::uniform_points(0.0, 1.0, 20001)
                .map(|t| ((lambda * t).cos() - (lambda * (1.0 + dq).sqrt() * t).cos()).abs())
                .fold(0.0, f64::max);
            assert!((r.sup_err - exact).abs() < 1e-3 * exact, "{} vs {exact}", r.sup_err);
            assert!(r.ok && r.gronwall_ratio <= 1.0);
            errs.push(r.sup_err);
        }
        assert!(errs[1] <= 0.5 * errs[0] * (1.0 + 1e-3));
    }

    #[test]
    fn exact_phase_for_constant_q() {
        let lambda = 40.0;
        let prob = make_problem(|_| 1.0, lambda, 0.0, 1.0, 1e-14).unwrap();
        let ap = ChebSeries::constant(0.0, 1.0, lambda).unwrap();
        let phase = PhaseFunction::from_derivative(ap, prob.clone(), 0.0, 0.0).unwrap();
        let oracle = |t: f64| -> Result<BasisSample> {
            let (s, c) = (lambda * t).sin_cos();
            Ok([(c, -lambda * s), (s, lambda * c)])
        };
        assert!(epsilon_approx_check(&phase, oracle, 1e-12).unwrap());

        let defect = ChebSeries::fit(|t| lambda * t + 1e-3 * t * t, 0.0, 1.0, 1e-15, 64).unwrap();
        let bad = PhaseFunction::from_alpha(defect, prob).unwrap();
        assert!(!epsilon_approx_check(&bad, oracle, 1e-6).unwrap());
    }

    #[test]
    fn sample_phase_against_direct_integration() {
        let lambda = 1000.0;
        let prob = make_problem(sample_q, lambda, -1.0, 1.0, 1e-14).unwrap();
        let lp = solve_kummer_log(&prob, 1e-12, 8).unwrap();
        let phase = build_phase(&lp, &prob, -1.0, 0.0).unwrap();
        let mut oracle = OdeOracle::new(&prob.q, lambda, -1.0, [(1.0, 0.0), (0.0, lambda)], DEFAULT_ODE_TOL).unwrap();
        let err = epsilon_approx_error(&phase, |t| oracle.sample(t)).unwrap();
        assert!(err <= 1e-8, "err {err}");
    }
}
