//! Chebyshev expansions of smooth functions on a finite interval.
//!
//! Functions are sampled at the Chebyshev extrema `cos(pi j / N)`, `j = 0..=N`,
//! mapped affinely onto `[a, b]`. Coefficients and samples are related by a
//! type-I cosine transform, which we evaluate with an FFT of the even
//! extension for large `N`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Starting order of the adaptive fit.
pub const MIN_FIT_ORDER: usize = 16;

/// Relative slack allowed when checking that a point lies in the interval.
const DOMAIN_SLACK: f64 = 1e-13;

/// A truncated Chebyshev-T expansion on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(a: f64, b: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_interval(a, b)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("empty coefficient list".into()));
        }
        Ok(Self { a, b, coeffs })
    }

    /// The constant function `value` on `[a, b]`.
    pub fn constant(a: f64, b: f64, value: f64) -> Result<Self> {
        Self::new(a, b, vec![value])
    }

    /// Builds the interpolant through samples taken at [`nodes`]`(a, b, N)`.
    pub fn from_values(a: f64, b: f64, values: &[f64]) -> Result<Self> {
        check_interval(a, b)?;
        if values.is_empty() {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        Ok(Self {
            a,
            b,
            coeffs: values_to_coeffs(values),
        })
    }

    /// Adaptive fit: doubles the order from 16 until the trailing two
    /// coefficients fall below `tol * max|c_k|`.
    ///
    /// The returned series is trimmed to the last significant coefficient
    /// plus two, so it still passes [`ChebSeries::is_resolved`].
    pub fn fit<F>(f: F, a: f64, b: f64, tol: f64, max_order: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        Self::fit_scaled(f, a, b, tol, 0.0, max_order)
    }

    /// Like [`ChebSeries::fit`], but coefficients are compared against
    /// `tol * max(max|c_k|, scale)`. Useful for functions that are
    /// identically zero up to rounding.
    pub fn fit_scaled<F>(f: F, a: f64, b: f64, tol: f64, scale: f64, max_order: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        check_interval(a, b)?;
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
        }
        let mut order = MIN_FIT_ORDER.min(max_order.max(2));
        loop {
            let values: Vec<f64> = nodes(a, b, order).into_iter().map(&f).collect();
            if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "function is not finite at t = {}",
                    nodes(a, b, order)[bad]
                )));
            }
            let coeffs = values_to_coeffs(&values);
            let floor = scale * tol;
            if coeffs_resolved_floor(&coeffs, tol, floor) {
                let mut s = Self { a, b, coeffs };
                s.trim_floor(tol, floor);
                return Ok(s);
            }
            if order >= max_order {
                return Err(Error::NotResolved { max_order });
            }
            order = (2 * order).min(max_order);
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Polynomial degree of the expansion.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_resolved(&self, tol: f64) -> bool {
        coeffs_resolved(&self.coeffs, tol)
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = DOMAIN_SLACK * (self.b - self.a).max(self.a.abs().max(self.b.abs()));
        t >= self.a - slack && t <= self.b + slack
    }

    /// Clenshaw evaluation; points outside `[a, b]` are rejected.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                a: self.a,
                b: self.b,
            });
        }
        Ok(self.eval_unchecked(t))
    }

    /// Clenshaw evaluation without the domain check. Callers guarantee
    /// `t` is in the interval.
    #[inline]
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        let x = ((2.0 * t - self.a - self.b) / (self.b - self.a)).clamp(-1.0, 1.0);
        clenshaw(&self.coeffs, x)
    }

    /// Values at the `order + 1` extrema nodes (descending in `x`).
    pub fn values_at_nodes(&self) -> Vec<f64> {
        coeffs_to_values(&self.coeffs)
    }

    /// Series for d/dt.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n == 1 {
            return Self {
                a: self.a,
                b: self.b,
                coeffs: vec![0.0],
            };
        }
        let c = &self.coeffs;
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
        }
        d.truncate(n - 1);
        d[0] *= 0.5;
        let scale = 2.0 / (self.b - self.a);
        d.iter_mut().for_each(|v| *v *= scale);
        Self {
            a: self.a,
            b: self.b,
            coeffs: d,
        }
    }

    /// Antiderivative vanishing at `t0`.
    pub fn antiderivative(&self, t0: f64) -> Result<Self> {
        if !self.contains(t0) {
            return Err(Error::OutOfDomain {
                t: t0,
                a: self.a,
                b: self.b,
            });
        }
        let n = self.coeffs.len();
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or(0.0);
        let mut out = vec![0.0; n + 1];
        out[1] = c(0) - 0.5 * c(2);
        for (k, slot) in out.iter_mut().enumerate().skip(2) {
            *slot = (c(k - 1) - c(k + 1)) / (2.0 * k as f64);
        }
        let scale = 0.5 * (self.b - self.a);
        out.iter_mut().for_each(|v| *v *= scale);
        let mut s = Self {
            a: self.a,
            b: self.b,
            coeffs: out,
        };
        let offset = s.eval_unchecked(t0);
        s.coeffs[0] -= offset;
        Ok(s)
    }

    /// Coefficient-wise sum of two series on the same interval.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_interval(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(0.0) + other.coeffs.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Ok(Self {
            a: self.a,
            b: self.b,
            coeffs,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            a: self.a,
            b: self.b,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Re-expresses the series with exactly `order + 1` coefficients,
    /// padding with zeros or truncating.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        Self {
            a: self.a,
            b: self.b,
            coeffs,
        }
    }

    /// Sup-norm estimate from a dense uniform sample.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        uniform_points(self.a, self.b, samples)
            .map(|t| self.eval_unchecked(t).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `k,coeff`, one row per coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,coeff\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{k},{c}");
        }
        out
    }

    /// Copy with trailing coefficients below `tol * max|c|` removed
    /// (two of them are kept).
    pub fn chopped(&self, tol: f64) -> Self {
        let mut s = self.clone();
        s.trim(tol);
        s
    }

    /// Drops trailing coefficients below `tol * max|c|`, keeping two of them.
    fn trim(&mut self, tol: f64) {
        self.trim_floor(tol, 0.0);
    }

    fn trim_floor(&mut self, tol: f64, floor: f64) {
        let cmax = max_abs(&self.coeffs);
        if cmax <= floor {
            self.coeffs.truncate(1);
            return;
        }
        let last = self
            .coeffs
            .iter()
            .rposition(|c| c.abs() > (tol * cmax).max(floor))
            .unwrap_or(0);
        self.coeffs.truncate((last + 3).min(self.coeffs.len()));
    }

    fn check_same_interval(&self, other: &Self) -> Result<()> {
        if self.a != other.a || self.b != other.b {
            return Err(Error::InvalidArgument(format!(
                "interval mismatch: [{}, {}] vs [{}, {}]",
                self.a, self.b, other.a, other.b
            )));
        }
        Ok(())
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval { a, b });
    }
    Ok(())
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
}

fn coeffs_resolved(coeffs: &[f64], tol: f64) -> bool {
    coeffs_resolved_floor(coeffs, tol, 0.0)
}

fn coeffs_resolved_floor(coeffs: &[f64], tol: f64, floor: f64) -> bool {
    let cmax = max_abs(coeffs);
    if cmax == 0.0 || coeffs.len() < 3 {
        return true;
    }
    let n = coeffs.len();
    let thr = (tol * cmax).max(floor);
    coeffs[n - 1].abs() <= thr && coeffs[n - 2].abs() <= thr
}

/// Chebyshev extrema on `[a, b]`, ordered from `b` down to `a`.
pub fn nodes(a: f64, b: f64, order: usize) -> Vec<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    if order == 0 {
        return vec![mid];
    }
    (0..=order)
        .map(|j| {
            // sin form keeps the nodes symmetric to full precision
            let x = (PI * (order as f64 - 2.0 * j as f64) / (2.0 * order as f64)).sin();
            mid + half * x
        })
        .collect()
}

pub(crate) fn uniform_points(a: f64, b: f64, count: usize) -> impl Iterator<Item = f64> {
    let count = count.max(2);
    (0..count).map(move |i| a + (b - a) * i as f64 / (count - 1) as f64)
}

/// Clenshaw recurrence for `sum c_k T_k(x)`, `x` in `[-1, 1]`.
#[inline]
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let two_x = 2.0 * x;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs[1..].iter().rev() {
        let b0 = two_x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + x * b1 - b2
}

/// `c_k = (2/N) sum'' f_j cos(pi j k / N)` with the end coefficients halved.
pub(crate) fn values_to_coeffs(values: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    if n == 0 {
        return vec![values[0]];
    }
    let raw = even_extension_transform(values);
    let mut c: Vec<f64> = raw.into_iter().map(|v| v / n as f64).collect();
    c[0] *= 0.5;
    c[n] *= 0.5;
    c
}

/// Inverse of [`values_to_coeffs`].
pub(crate) fn coeffs_to_values(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return vec![coeffs[0]];
    }
    let g = even_extension_transform(coeffs);
    (0..=n)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * (g[j] + coeffs[0] + sign * coeffs[n])
        })
        .collect()
}

/// `F_k = v_0 + (-1)^k v_N + 2 sum_{j=1}^{N-1} v_j cos(pi j k / N)`, `k = 0..=N`.
fn even_extension_transform(v: &[f64]) -> Vec<f64> {
    let n = v.len() - 1;
    if n <= 64 {
        return (0..=n)
            .map(|k| {
                let mut s = v[0] + if k % 2 == 0 { v[n] } else { -v[n] };
                for (j, vj) in v.iter().enumerate().take(n).skip(1) {
                    s += 2.0 * vj * (PI * ((j * k) % (2 * n)) as f64 / n as f64).cos();
                }
                s
            })
            .collect();
    }
    let m = 2 * n;
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(m);
    buf.extend(v.iter().map(|&x| Complex::new(x, 0.0)));
    buf.extend(v[1..n].iter().rev().map(|&x| Complex::new(x, 0.0)));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    buf.truncate(n + 1);
    buf.into_iter().map(|z| z.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_q(t: f64) -> f64 {
        3.0 + 1.0 / (1.0 + 10.0 * t * t) + t.powi(3) * (5.0 * t).cos()
    }

    #[test]
    fn constant_fit() {
        let s = ChebSeries::fit(|_| 1.0, -1.0, 1.0, 1e-14, 1024).unwrap();
        assert!((s.coeffs()[0] - 1.0).abs() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn square_fit_matches_identity() {
        let s = ChebSeries::fit(|t| t * t, -1.0, 1.0, 1e-14, 1024).unwrap();
        let c = s.coeffs();
        assert!((c[0] - 0.5).abs() < 1e-15);
        assert!(c[1].abs() < 1e-15);
        assert!((c[2] - 0.5).abs() < 1e-15);
        assert!(c[3..].iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn sample_q_resolves_below_order_200() {
        let s = ChebSeries::fit(sample_q, -1.0, 1.0, 1e-13, 4096).unwrap();
        assert!(s.order() <= 200, "order {}", s.order());
        let c = s.coeffs();
        assert!(c[c.len() - 1].abs() < 1e-13 * 4.0);
        // doubling the sample count changes nothing above the tolerance
        let dense = ChebSeries::from_values(
            -1.0,
            1.0,
            &nodes(-1.0, 1.0, 2 * s.order()).into_iter().map(sample_q).collect::<Vec<_>>(),
        )
        .unwrap();
        for (k, ck) in c.iter().enumerate() {
            assert!((ck - dense.coeffs()[k]).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn eval_examples() {
        let s = ChebSeries::new(-1.0, 1.0, vec![0.0, 1.0]).unwrap();
        assert!((s.eval(0.3).unwrap() - 0.3).abs() < 1e-16);
        let s = ChebSeries::new(-1.0, 1.0, vec![0.5, 0.0, 0.5]).unwrap();
        assert!((s.eval(0.7).unwrap() - 0.49).abs() < 1e-15);
        let q = ChebSeries::fit(sample_q, -1.0, 1.0, 1e-14, 4096).unwrap();
        assert!((q.eval(0.0).unwrap() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn eval_rejects_extrapolation() {
        let s = ChebSeries::new(0.0, 1.0, vec![1.0, 2.0]).unwrap();
        assert!(matches!(s.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(s.eval(-0.01), Err(Error::OutOfDomain { .. })));
        assert!(s.eval(1.0).is_ok());
    }

    #[test]
    fn derivative_examples() {
        let s = ChebSeries::new(-1.0, 1.0, vec![0.0, 1.0]).unwrap();
        assert_eq!(s.derivative().coeffs(), &[1.0]);
        let sq = ChebSeries::fit(|t| t * t, -1.0, 1.0, 1e-14, 64).unwrap();
        let d = sq.derivative();
        assert!(d.coeffs()[0].abs() < 1e-14);
        assert!((d.coeffs()[1] - 2.0).abs() < 1e-14);
        let s5 = ChebSeries::fit(|t| (5.0 * t).sin(), -1.0, 1.0, 1e-15, 1024).unwrap();
        let v = s5.derivative().eval(0.2).unwrap();
        assert!((v - 5.0 * 1.0_f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn derivative_respects_interval_scaling() {
        let s = ChebSeries::fit(|t| t.exp(), 2.0, 5.0, 1e-15, 1024).unwrap();
        let d = s.derivative();
        for t in [2.0, 3.3, 5.0] {
            assert!((d.eval(t).unwrap() - t.exp()).abs() < 1e-11 * t.exp());
        }
    }

    #[test]
    fn antiderivative_examples() {
        let one = ChebSeries::constant(-1.0, 1.0, 1.0).unwrap();
        let t = one.antiderivative(0.0).unwrap();
        assert!(t.coeffs()[0].abs() < 1e-16);
        assert!((t.coeffs()[1] - 1.0).abs() < 1e-16);
        let two_t = ChebSeries::new(-1.0, 1.0, vec![0.0, 2.0]).unwrap();
        let sq = two_t.antiderivative(0.0).unwrap();
        for x in [-0.9, 0.1, 0.8] {
            assert!((sq.eval(x).unwrap() - x * x).abs() < 1e-15);
        }
        let sqrt_q = ChebSeries::fit(|_| 4.0_f64.sqrt(), -1.0, 1.0, 1e-14, 64).unwrap();
        let x = sqrt_q.antiderivative(0.0).unwrap();
        assert!((x.eval(1.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn antiderivative_rejects_outside_anchor() {
        let s = ChebSeries::constant(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(s.antiderivative(2.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn not_resolved_reported() {
        let err = ChebSeries::fit(|t| (400.0 * t).sin(), -1.0, 1.0, 1e-14, 64).unwrap_err();
        assert_eq!(err, Error::NotResolved { max_order: 64 });
    }

    #[test]
    fn transforms_are_inverse() {
        for n in [5usize, 64, 65, 300] {
            let vals: Vec<f64> = (0..=n).map(|j| ((j * 7919) % 97) as f64 / 97.0 - 0.5).collect();
            let back = coeffs_to_values(&values_to_coeffs(&vals));
            for (x, y) in vals.iter().zip(&back) {
                assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let s = ChebSeries::new(-1.0, 1.0, vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(s.to_csv(), "k,coeff\n0,0.5\n1,0\n2,0.5\n");
    }
}
