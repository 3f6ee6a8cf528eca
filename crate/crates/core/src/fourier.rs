//! Frequency-domain form of the band-limited integral equation.
//!
//! Transforms use `f^(xi) = ∫ f(x) exp(-i x xi) dx`, so the transform of a
//! pointwise product is `(1/2π)` times the convolution of the transforms.
//! Every convolution in this module carries that factor; the decay lemma for
//! `exp*_2` is only true with it.
//!
//! Functions live on a uniform grid over `[-xi_max, xi_max]` with an even
//! number of subintervals, so `xi = 0` is a sample and the grid is symmetric.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::cheb::ChebSeries;
use crate::error::{Error, Result};

/// Default number of subintervals of the frequency grid.
pub const DEFAULT_INTERVALS: usize = 4096;
/// Default half-width of the frequency grid, in units of `lambda`.
pub const DEFAULT_EXTENT: f64 = 4.0;
/// Transition sharpness used when none is specified.
pub const DEFAULT_SHARPNESS: f64 = 1.0;
/// `exp_star` refuses inputs with a larger L1 norm.
pub const EXP_SERIES_LIMIT: f64 = 30.0;

const EXP_SERIES_RTOL: f64 = 1e-16;
const EXP_SERIES_MAX_TERMS: usize = 500;
/// Relative size at the window edge above which `apply_t` refuses its input.
const EDGE_TOL: f64 = 1e-13;
const HYPOTHESIS_SLACK: f64 = 1e-4;
const APPLY_T_MAX_ORDER: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct FourierGridFunction {
    pub xi_max: f64,
    /// Number of subintervals; there are `n + 1` samples.
    pub n: usize,
    pub values: Vec<Complex64>,
}

impl FourierGridFunction {
    pub fn new(xi_max: f64, n: usize, values: Vec<Complex64>) -> Result<Self> {
        if !(xi_max > 0.0 && xi_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("xi_max must be positive, got {xi_max}")));
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "grid needs an even number of subintervals, got {n}"
            )));
        }
        if values.len() != n + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                n + 1,
                values.len()
            )));
        }
        Ok(Self { xi_max, n, values })
    }

    pub fn zeros(xi_max: f64, n: usize) -> Result<Self> {
        Self::new(xi_max, n, vec![Complex64::new(0.0, 0.0); n + 1])
    }

    pub fn from_fn<F: FnMut(f64) -> Complex64>(xi_max: f64, n: usize, mut f: F) -> Result<Self> {
        let mut g = Self::zeros(xi_max, n)?;
        for j in 0..=n {
            g.values[j] = f(g.xi(j));
        }
        Ok(g)
    }

    pub fn from_real_fn<F: FnMut(f64) -> f64>(xi_max: f64, n: usize, mut f: F) -> Result<Self> {
        Self::from_fn(xi_max, n, |xi| Complex64::new(f(xi), 0.0))
    }

    /// Samples `f` on `[-4 lambda, 4 lambda]` with 4096 subintervals.
    pub fn on_default_grid<F: Fn(f64) -> f64>(lambda: f64, f: F) -> Result<Self> {
        Self::from_real_fn(DEFAULT_EXTENT * lambda, DEFAULT_INTERVALS, f)
    }

    pub fn step(&self) -> f64 {
        2.0 * self.xi_max / self.n as f64
    }

    /// Grid point `j`; exactly antisymmetric about the centre.
    pub fn xi(&self, j: usize) -> f64 {
        (2.0 * j as f64 - self.n as f64) * self.xi_max / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoid-rule L1 norm.
    pub fn l1_norm(&self) -> f64 {
        let last = self.n;
        let s: f64 = self
            .values
            .iter()
            .enumerate()
            .map(|(j, v)| if j == 0 || j == last { 0.5 * v.norm() } else { v.norm() })
            .sum();
        s * self.step()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max |f(-xi) - conj f(xi)|`; zero for transforms of real functions.
    pub fn hermitian_defect(&self) -> f64 {
        (0..=self.n)
            .map(|j| (self.values[self.n - j] - self.values[j].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let values = (0..=self.n).map(|j| f(self.xi(j), self.values[j])).collect();
        Self { values, ..*self }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_aligned(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    fn check_aligned(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.xi_max != other.xi_max {
            return Err(Error::InvalidArgument(format!(
                "grids differ: ({}, {}) vs ({}, {})",
                self.xi_max, self.n, other.xi_max, other.n
            )));
        }
        Ok(())
    }

    /// `(1/2π) ∫ f(eta) g(xi - eta) d eta` sampled on the same grid, by
    /// trapezoid quadrature evaluated with a zero-padded FFT. Mass that lands
    /// outside the window is dropped.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_aligned(other)?;
        let m = self.len();
        let size = (2 * m - 1).next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(size);
        let inv = planner.plan_fft_inverse(size);

        let mut a = vec![Complex64::new(0.0, 0.0); size];
        let mut b = a.clone();
        for j in 0..m {
            a[j] = self.values[j] * trap_weight(j, self.n);
            b[j] = other.values[j];
        }
        fwd.process(&mut a);
        fwd.process(&mut b);
        for (x, y) in a.iter_mut().zip(&b) {
            *x *= y;
        }
        inv.process(&mut a);

        let factor = self.step() / (2.0 * PI) / size as f64;
        let half = self.n / 2;
        let values = (0..m).map(|k| a[k + half] * factor).collect();
        Ok(Self { values, ..*self })
    }

    /// Same quadrature as [`FourierGridFunction::convolve`], summed directly.
    /// Quadratic cost; kept as a reference for the FFT path.
    pub fn convolve_direct(&self, other: &Self) -> Result<Self> {
        self.check_aligned(other)?;
        let m = self.len() as isize;
        let half = (self.n / 2) as isize;
        let factor = self.step() / (2.0 * PI);
        let values = (0..m)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    let i = k - j + half;
                    if (0..m).contains(&i) {
                        acc += self.values[j as usize] * trap_weight(j as usize, self.n) * other.values[i as usize];
                    }
                }
                acc * factor
            })
            .collect();
        Ok(Self { values, ..*self })
    }
}

fn trap_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j == n {
        0.5
    } else {
        1.0
    }
}

/// Smooth even cutoff: 1 on `|xi| <= lambda`, 0 on `|xi| >= sqrt(2) lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    pub lambda: f64,
    pub sharpness: f64,
}

/// Builds the cutoff from the `exp(-k/s)` smoothstep over `[lambda, sqrt(2) lambda]`.
/// Larger `sharpness` flattens the ends of the transition.
///
/// # Panics
/// If `lambda` or `sharpness` is not positive and finite.
pub fn make_bump(lambda: f64, sharpness: f64) -> BumpProfile {
    assert!(lambda > 0.0 && lambda.is_finite(), "lambda must be positive");
    assert!(sharpness > 0.0 && sharpness.is_finite(), "sharpness must be positive");
    BumpProfile { lambda, sharpness }
}

impl BumpProfile {
    pub fn eval(&self, xi: f64) -> f64 {
        let s = (xi.abs() - self.lambda) / ((SQRT_2 - 1.0) * self.lambda);
        if s <= 0.0 {
            return 1.0;
        }
        if s >= 1.0 {
            return 0.0;
        }
        let rise = (-self.sharpness / s).exp();
        let fall = (-self.sharpness / (1.0 - s)).exp();
        fall / (rise + fall)
    }

    pub fn support(&self) -> f64 {
        SQRT_2 * self.lambda
    }
}

/// `gamma * exp(-a |xi|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayEnvelope {
    pub gamma: f64,
    pub a: f64,
}

impl DecayEnvelope {
    pub fn eval(&self, xi: f64) -> f64 {
        self.gamma * (-self.a * xi.abs()).exp()
    }

    /// Largest `|f(xi)| / envelope(xi)` over the grid; at most 1 when the
    /// envelope dominates.
    pub fn max_ratio(&self, f: &FourierGridFunction) -> f64 {
        (0..=f.n)
            .map(|j| f.values[j].norm() / self.eval(f.xi(j)))
            .fold(0.0, f64::max)
    }

    pub fn dominates(&self, f: &FourierGridFunction, rel_tol: f64) -> bool {
        self.max_ratio(f) <= 1.0 + rel_tol
    }
}

/// Pointwise bound on `exp*_2[f]` for `|f(xi)| <= c exp(-a |xi|)`, `0 <= c < a`:
/// `(c^2 / 2π) exp(-a|xi|) ((1 + a|xi|) / a) exp(c / 2πa) exp(c |xi| / 2π)`.
pub fn exp2_lemma_bound(c: f64, a: f64, xi: f64) -> f64 {
    let x = xi.abs();
    let tau = 2.0 * PI;
    c * c / tau * (-a * x).exp() * (1.0 + a * x) / a * (c / (tau * a)).exp() * (c * x / tau).exp()
}

/// `W_b` (`weighted = false`) multiplies by `b / (4 lambda^2 - xi^2)`;
/// `W~_b` (`weighted = true`) by `b i xi / (4 lambda^2 - xi^2)`.
pub fn apply_w(f: &FourierGridFunction, b: &BumpProfile, weighted: bool) -> FourierGridFunction {
    let four_l2 = 4.0 * b.lambda * b.lambda;
    f.map(|xi, v| {
        let bx = b.eval(xi);
        if bx == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let m = bx / (four_l2 - xi * xi);
        if weighted {
            v * Complex64::new(0.0, m * xi)
        } else {
            v * m
        }
    })
}

/// `sum_{m >= drop} f^{*m} / m!`, for `drop` 1 or 2.
pub fn exp_star(f: &FourierGridFunction, drop: u32) -> Result<FourierGridFunction> {
    if !(drop == 1 || drop == 2) {
        return Err(Error::InvalidArgument(format!("drop must be 1 or 2, got {drop}")));
    }
    let l1 = f.l1_norm();
    if !(l1 <= EXP_SERIES_LIMIT) {
        return Err(Error::Divergence { l1 });
    }
    let mut sum = if drop == 1 {
        f.clone()
    } else {
        FourierGridFunction::zeros(f.xi_max, f.n)?
    };
    if l1 == 0.0 {
        return Ok(sum);
    }
    let mut term = f.clone();
    for m in 2..EXP_SERIES_MAX_TERMS {
        term = term.convolve(f)?.scale(1.0 / m as f64);
        sum = sum.add(&term)?;
        let t = term.l1_norm();
        if t <= EXP_SERIES_RTOL * sum.l1_norm() || t == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// `R[psi] = (1/4) (W~ psi)*(W~ psi) - 4 lambda^2 exp*_2[W psi] + v`.
pub fn apply_r(psi: &FourierGridFunction, v: &FourierGridFunction, b: &BumpProfile) -> Result<FourierGridFunction> {
    let lambda = b.lambda;
    let wt = apply_w(psi, b, true);
    let w = apply_w(psi, b, false);
    let quad = wt.convolve(&wt)?.scale(0.25);
    let tail = exp_star(&w, 2)?.scale(-4.0 * lambda * lambda);
    quad.add(&tail)?.add(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointState {
    pub psi: FourierGridFunction,
    /// Number of applications of `R`.
    pub iterates: usize,
    /// `||psi_{k+1} - psi_k||_1` for each step.
    pub l1_history: Vec<f64>,
    /// Whether `||v||_1 <= lambda^2 / 18`, the sufficient condition for
    /// contraction. Iteration proceeds either way.
    pub within_hypothesis: bool,
}

impl FixedPointState {
    /// Ratios of successive entries of `l1_history`, skipping steps whose
    /// size is below `floor` (where rounding dominates).
    pub fn contraction_ratios(&self, floor: f64) -> Vec<f64> {
        self.l1_history
            .windows(2)
            .filter(|w| w[1] > floor)
            .map(|w| w[1] / w[0])
            .collect()
    }
}

/// Iterates `psi <- R[psi]` from `psi = v` until successive iterates differ by
/// at most `tol` in L1.
pub fn fixed_point_solve(
    v: &FourierGridFunction,
    b: &BumpProfile,
    tol: f64,
    max_iters: usize,
) -> Result<FixedPointState> {
    let lambda = b.lambda;
    // The slack absorbs trapezoid error on inputs that sit on the boundary.
    let within_hypothesis = v.l1_norm() <= lambda * lambda / 18.0 * (1.0 + HYPOTHESIS_SLACK);
    let mut psi = v.clone();
    let mut history = Vec::new();
    for k in 1..=max_iters {
        let next = apply_r(&psi, v, b)?;
        let diff = next.sub(&psi)?.l1_norm();
        history.push(diff);
        psi = next;
        if diff <= tol {
            return Ok(FixedPointState {
                psi,
                iterates: k,
                l1_history: history,
                within_hypothesis,
            });
        }
    }
    Err(Error::NoConvergence { history })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandLimited {
    /// `psi * b`.
    pub sigma_b_hat: FourierGridFunction,
    /// Transform of `p_b = p + sigma_b - sigma`.
    pub pb_hat: FourierGridFunction,
    /// `||psi - psi b||_1`, which bounds `sup |p - p_b|` up to the `1/2π` of
    /// the inverse transform.
    pub bound: f64,
}

pub fn build_pb(psi: &FourierGridFunction, b: &BumpProfile, v: &FourierGridFunction) -> Result<BandLimited> {
    let sigma_b_hat = psi.map(|xi, z| z * b.eval(xi));
    let cut = psi.sub(&sigma_b_hat)?;
    let pb_hat = v.sub(&cut)?;
    Ok(BandLimited {
        bound: cut.l1_norm(),
        sigma_b_hat,
        pb_hat,
    })
}

/// `(T f)(x) = (1/4 lambda) ∫ sin(2 lambda |x - y|) f(y) dy` with `f`
/// supported on the interval of the series, returned on that interval.
///
/// Splitting the kernel at `y = x` turns the integral into running
/// antiderivatives of `cos(2 lambda y) f` and `sin(2 lambda y) f`, which are
/// computed exactly on their Chebyshev expansions.
pub fn apply_t(f: &ChebSeries, lambda: f64) -> Result<ChebSeries> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let (a, b) = f.interval();
    let sup = f.sup_norm(4001);
    if sup == 0.0 {
        return ChebSeries::constant(a, b, 0.0);
    }
    let edge = f.eval_unchecked(a).abs().max(f.eval_unchecked(b).abs());
    if edge > EDGE_TOL * sup {
        return Err(Error::WindowTooSmall { edge_value: edge });
    }
    let w = 2.0 * lambda;
    let fit = |g: &dyn Fn(f64) -> f64| ChebSeries::fit_scaled(g, a, b, 1e-15, sup, APPLY_T_MAX_ORDER);
    let c = fit(&|y| (w * y).cos() * f.eval_unchecked(y))?.antiderivative(a)?;
    let s = fit(&|y| (w * y).sin() * f.eval_unchecked(y))?.antiderivative(a)?;
    let (ct, st) = (c.eval_unchecked(b), s.eval_unchecked(b));
    let tf = |x: f64| {
        let cx = 2.0 * c.eval_unchecked(x) - ct;
        let sx = 2.0 * s.eval_unchecked(x) - st;
        ((w * x).sin() * cx - (w * x).cos() * sx) / (4.0 * lambda)
    };
    ChebSeries::fit_scaled(tf, a, b, 1e-15, sup / (lambda * lambda), APPLY_T_MAX_ORDER)
}
