//! Special functions: recurrence oracles, the Lambert W function, and
//! evaluation of Legendre polynomials and Bessel functions of large order
//! through nonoscillatory phase functions.
//!
//! Legendre polynomials are handled in the angle variable. With
//! `t = cos(theta)` and `lambda = n + 1/2`, the function
//! `w(theta) = sqrt(sin theta) P_n(cos theta)` satisfies
//!
//! ```text
//! w'' + lambda^2 (1 + 1 / (4 lambda^2 sin^2 theta)) w = 0,
//! ```
//!
//! whose coefficient stays bounded and smooth on `[theta_min, pi/2]`.
//! Bessel functions use `s = t/n` on `[2, 3]`, where `sqrt(t) J_n(t)`
//! satisfies `psi'' + n^2 (1 - (n^2 - 1/4)/(n^2 s^2)) psi = 0`.

use std::f64::consts::{E, FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::phase::{self, NewtonOptions, PhaseFunction};

// ---------------------------------------------------------------------------
// Recurrence oracles

/// `P_n(t)` by the upward three-term recurrence.
pub fn legendre_recurrence(n: u64, t: f64) -> Result<f64> {
    Ok(legendre_pair(n, t)?.0)
}

/// `(P_n(t), P_{n-1}(t))`; the second entry is 0 for `n = 0`.
pub fn legendre_pair(n: u64, t: f64) -> Result<(f64, f64)> {
    if !(t.abs() <= 1.0) {
        return Err(Error::OutOfDomain { t, a: -1.0, b: 1.0 });
    }
    if n == 0 {
        return Ok((1.0, 0.0));
    }
    let (mut prev, mut cur) = (1.0, t);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok((cur, prev))
}

/// Default Miller start offset `max(20, ceil(1.5 t))`.
pub fn default_start_offset(t: f64) -> u64 {
    20u64.max((1.5 * t).ceil() as u64)
}

const RESCALE_AT: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_n(t)` by Miller's backward recurrence from index `n + start_offset`,
/// normalized with `J_0 + 2 sum J_{2k} = 1`.
pub fn bessel_backward(n: u64, t: f64, start_offset: u64) -> Result<f64> {
    Ok(bessel_backward_jet(n, t, start_offset)?.0)
}

/// `(J_n(t), J_n'(t))` from a single backward sweep.
pub fn bessel_backward_jet(n: u64, t: f64, start_offset: u64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("Bessel argument must be positive, got {t}")));
    }
    let top = n + start_offset.max(2);
    let two_over_t = 2.0 / t;
    // j[k+1], j[k] for decreasing k
    let mut above = 0.0_f64;
    let mut cur = 1e-300_f64;
    let mut sum = 0.0_f64;
    let mut keep = [0.0_f64; 3]; // j_{n+1}, j_n, j_{n-1}
    let mut lost = false;
    let mut k = top;
    loop {
        if k % 2 == 0 {
            sum += if k == 0 { cur } else { 2.0 * cur };
        }
        if k == n + 1 {
            keep[0] = cur;
        } else if k == n {
            keep[1] = cur;
        } else if n > 0 && k == n - 1 {
            keep[2] = cur;
        }
        if k == 0 {
            break;
        }
        let below = k as f64 * two_over_t * cur - above;
        above = cur;
        cur = below;
        k -= 1;
        if cur.abs() > RESCALE_AT {
            cur *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            keep.iter_mut().for_each(|v| *v *= RESCALE_BY);
            // j_n has been pushed below the normal range by later growth
            lost |= k < n && keep[1].abs() < f64::MIN_POSITIVE * 1e20;
        }
    }
    let jn = keep[1] / sum;
    if lost || !jn.is_finite() {
        return Err(Error::Underflow { n, t });
    }
    let djn = if n == 0 {
        -keep[0] / sum
    } else {
        0.5 * (keep[2] - keep[0]) / sum
    };
    Ok((jn, djn))
}

// ---------------------------------------------------------------------------
// Families and standard forms

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    Legendre,
    BesselJ,
}

/// A special function together with the domain it is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFamily {
    pub kind: SpecialKind,
    pub n: u64,
    pub domain: (f64, f64),
}

impl SpecialFamily {
    /// `P_n` on `(-1, 1)`.
    pub fn legendre(n: u64) -> Self {
        Self {
            kind: SpecialKind::Legendre,
            n,
            domain: (-1.0, 1.0),
        }
    }

    /// `J_n` on `[2n, 3n]`.
    pub fn bessel(n: u64) -> Self {
        let nf = n as f64;
        Self {
            kind: SpecialKind::BesselJ,
            n,
            domain: (2.0 * nf, 3.0 * nf),
        }
    }

    /// Frequency used for the phase function.
    pub fn lambda(&self) -> f64 {
        match self.kind {
            SpecialKind::Legendre => self.n as f64 + 0.5,
            SpecialKind::BesselJ => self.n as f64,
        }
    }

    /// Smallest angle covered by the Legendre phase function.
    pub fn theta_min(&self) -> f64 {
        (20.0 / self.lambda()).clamp(0.01, 0.5)
    }

    /// Interval of the phase variable (angle for Legendre, `t/n` for Bessel).
    pub fn phase_interval(&self) -> (f64, f64) {
        match self.kind {
            SpecialKind::Legendre => (self.theta_min(), FRAC_PI_2 + 0.1),
            SpecialKind::BesselJ => (2.0, 3.0),
        }
    }

    /// Matching point used by [`normalize_phase`] by default.
    pub fn default_reference(&self) -> f64 {
        match self.kind {
            SpecialKind::Legendre => FRAC_PI_2,
            SpecialKind::BesselJ => 2.5,
        }
    }

    /// Coefficient `q` of the phase-variable equation `w'' + lambda^2 q w = 0`.
    pub fn phase_q(&self) -> impl Fn(f64) -> f64 + Send + Sync + 'static {
        let lambda = self.lambda();
        let kind = self.kind;
        let nf = self.n as f64;
        move |x: f64| match kind {
            SpecialKind::Legendre => {
                let s = x.sin();
                1.0 + 1.0 / (4.0 * lambda * lambda * s * s)
            }
            SpecialKind::BesselJ => 1.0 - (1.0 - 0.25 / (nf * nf)) / (x * x),
        }
    }

    fn check(&self) -> Result<()> {
        if self.kind == SpecialKind::BesselJ && self.n == 0 {
            return Err(Error::InvalidArgument("Bessel phase needs n >= 1".into()));
        }
        Ok(())
    }
}

/// The standard form `psi'' + lambda^2 q(x) psi = 0` of a family, with
/// `psi = weight(t) y(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub kind: SpecialKind,
    pub n: u64,
    pub lambda: f64,
    /// `t = scale * x`; 1 for Legendre, `n` for Bessel.
    pub scale: f64,
}

impl StandardForm {
    /// The full coefficient multiplying `psi` in the variable `t`.
    pub fn coefficient(&self, t: f64) -> f64 {
        let nf = self.n as f64;
        match self.kind {
            SpecialKind::Legendre => {
                let w = 1.0 - t * t;
                (1.0 + nf - nf * t * t - nf * nf * (t * t - 1.0)) / (w * w)
            }
            SpecialKind::BesselJ => 1.0 - (nf * nf - 0.25) / (t * t),
        }
    }

    /// `q` in the scaled variable `x = t / scale`.
    pub fn q(&self, x: f64) -> f64 {
        let t = self.scale * x;
        self.scale * self.scale * self.coefficient(t) / (self.lambda * self.lambda)
    }

    /// `psi / y`.
    pub fn weight(&self, t: f64) -> f64 {
        match self.kind {
            SpecialKind::Legendre => ((1.0 - t) * (1.0 + t)).sqrt(),
            SpecialKind::BesselJ => t.sqrt(),
        }
    }
}

/// Standard form of the family in its original variable: for Legendre
/// `lambda^2 = n(n+1)` on `(-1, 1)`; for Bessel `lambda = n` with `s = t/n`.
pub fn standard_form_q(family: &SpecialFamily) -> StandardForm {
    let nf = family.n as f64;
    match family.kind {
        SpecialKind::Legendre => StandardForm {
            kind: family.kind,
            n: family.n,
            lambda: (nf * (nf + 1.0)).sqrt().max(f64::MIN_POSITIVE),
            scale: 1.0,
        },
        SpecialKind::BesselJ => StandardForm {
            kind: family.kind,
            n: family.n,
            lambda: nf,
            scale: nf,
        },
    }
}

// ---------------------------------------------------------------------------
// Lambert W

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambertBranch {
    W0,
    Wm1,
}

/// Real branches of the inverse of `w exp(w)`, by Halley's method.
pub fn lambert_w(branch: LambertBranch, y: f64) -> Result<f64> {
    let branch_point = -1.0 / E;
    if !y.is_finite() || y < branch_point {
        return Err(Error::OutOfBranchDomain { y });
    }
    if branch == LambertBranch::Wm1 && y >= 0.0 {
        return Err(Error::OutOfBranchDomain { y });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == branch_point {
        return Ok(-1.0);
    }
    // distance to the branch point, p ~ sqrt(2 (e y + 1))
    let p = (2.0 * (E * y + 1.0)).max(0.0).sqrt();
    let mut w = match branch {
        LambertBranch::W0 => {
            if y < -0.25 {
                -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
            } else if y < 3.0 {
                (1.0 + y).ln() * (1.0 - 0.25 * (1.0 + y).ln().min(1.0))
            } else {
                let l1 = y.ln();
                let l2 = l1.ln();
                l1 - l2 + l2 / l1
            }
        }
        LambertBranch::Wm1 => {
            if y < -0.25 {
                -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p
            } else {
                let l1 = (-y).ln();
                let l2 = (-l1).ln();
                l1 - l2 + l2 / l1
            }
        }
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - y;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        let done = (next - w).abs() <= 1e-15 * next.abs().max(1e-300);
        w = next;
        if done || f == 0.0 {
            break;
        }
    }
    Ok(w)
}

// ---------------------------------------------------------------------------
// Phase-based evaluation

/// Closed form `P_n(0)`.
pub fn legendre_at_zero(n: u64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    sign * central_ratio(m)
}

/// Closed form `P_n'(0) = n P_{n-1}(0)`.
pub fn legendre_slope_at_zero(n: u64) -> f64 {
    if n % 2 == 0 {
        return 0.0;
    }
    n as f64 * legendre_at_zero(n - 1)
}

/// `(2m-1)!! / (2m)!! = Gamma(m + 1/2) / (sqrt(pi) Gamma(m + 1))`.
fn central_ratio(m: u64) -> f64 {
    if m <= 200 {
        return (1..=m).fold(1.0, |acc, k| acc * (2 * k - 1) as f64 / (2 * k) as f64);
    }
    let x = m as f64;
    let x2 = x * x;
    let x3 = x2 * x;
    let x5 = x3 * x2;
    let x7 = x5 * x2;
    let log_ratio = -0.5 * x.ln() - 1.0 / (8.0 * x) + 1.0 / (192.0 * x3) - 1.0 / (640.0 * x5) + 17.0 / (14336.0 * x7);
    log_ratio.exp() / PI.sqrt()
}

/// Target function and its derivative in the phase variable at `x`.
fn target_jet(family: &SpecialFamily, x: f64) -> Result<(f64, f64)> {
    let n = family.n;
    match family.kind {
        SpecialKind::Legendre => {
            let (s, c) = x.sin_cos();
            let (p, dp) = if (x - FRAC_PI_2).abs() < 1e-15 {
                (legendre_at_zero(n), legendre_slope_at_zero(n))
            } else {
                let (p, pm1) = legendre_pair(n, c)?;
                let dp = if n == 0 { 0.0 } else { n as f64 * (c * p - pm1) / (c * c - 1.0) };
                (p, dp)
            };
            let rs = s.sqrt();
            Ok((rs * p, 0.5 * c / rs * p - s * rs * dp))
        }
        SpecialKind::BesselJ => {
            let nf = n as f64;
            let t = nf * x;
            let (j, dj) = bessel_backward_jet(n, t, default_start_offset(t))?;
            let rt = t.sqrt();
            Ok((rt * j, nf * (0.5 * j / rt + rt * dj)))
        }
    }
}

/// Newton settings used for special-function phases.
pub fn family_options() -> NewtonOptions {
    NewtonOptions {
        tol: 1e-11,
        max_iters: 10,
        ..NewtonOptions::default()
    }
}

/// Builds the phase function of `family` in its phase variable.
pub fn build_family_phase(family: &SpecialFamily, opts: &NewtonOptions) -> Result<PhaseFunction> {
    family.check()?;
    let (a, b) = family.phase_interval();
    let problem = phase::make_problem(family.phase_q(), family.lambda(), a, b, 1e-14)?;
    let lp = phase::solve_kummer_log_with(&problem, opts)?;
    phase::build_phase(&lp, &problem, a, 0.0)
}

/// A phase function together with the connection coefficients expressing
/// the target as `c1 u + c2 v`.
#[derive(Debug, Clone)]
pub struct NormalizedPhase {
    pub phase: PhaseFunction,
    pub c1: f64,
    pub c2: f64,
    pub family: SpecialFamily,
}

/// Matches value and slope of the target at `t_ref` (phase variable).
pub fn normalize_phase(phase: PhaseFunction, family: &SpecialFamily, t_ref: f64) -> Result<NormalizedPhase> {
    let (a, b) = phase.interval();
    if !(t_ref > a && t_ref < b) {
        return Err(Error::OutOfDomain { t: t_ref, a, b });
    }
    let (f, fp) = target_jet(family, t_ref)?;
    let (c1, c2) = connection(&phase, t_ref, f, fp)?;
    Ok(NormalizedPhase {
        phase,
        c1,
        c2,
        family: *family,
    })
}

/// Solves `[u v; u' v'] c = [f; fp]` at `x`.
pub fn connection(phase: &PhaseFunction, x: f64, f: f64, fp: f64) -> Result<(f64, f64)> {
    let jet = phase.jet(x)?;
    let ap = phase.alpha_prime.eval(x)?;
    // scale rows so a genuine phase basis gives a rotation-like matrix
    let (s1, s2) = (ap.sqrt(), 1.0 / ap.sqrt());
    let m = [[jet.u * s1, jet.v * s1], [jet.du * s2, jet.dv * s2]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let frob2: f64 = m.iter().flatten().map(|v| v * v).sum();
    let cond = frob2 / det.abs();
    if !(cond <= 1e6) {
        return Err(Error::IllConditioned { cond });
    }
    let w = jet.u * jet.dv - jet.du * jet.v;
    Ok(((f * jet.dv - jet.v * fp) / w, (jet.u * fp - jet.du * f) / w))
}

/// One evaluated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    /// The point lay outside the phase interval and the recurrence was used.
    pub fallback: bool,
}

impl NormalizedPhase {
    /// Builds and normalizes the phase of `family` at its default reference.
    pub fn for_family(family: &SpecialFamily) -> Result<Self> {
        let phase = build_family_phase(family, &family_options())?;
        normalize_phase(phase, family, family.default_reference())
    }

    #[inline]
    fn combine(&self, x: f64) -> f64 {
        let b = self.phase.basis_unchecked(x);
        self.c1 * b.u + self.c2 * b.v
    }

    /// Value of the target at `t` in the family's own variable.
    pub fn eval(&self, t: f64) -> Result<Evaluated> {
        let (lo, hi) = self.family.domain;
        let n = self.family.n;
        match self.family.kind {
            SpecialKind::Legendre => {
                if !(t.abs() <= 1.0) {
                    return Err(Error::OutOfDomain { t, a: lo, b: hi });
                }
                let ta = t.abs();
                let sign = if t < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
                let theta = ta.acos();
                if theta < self.phase.interval().0 {
                    return Ok(Evaluated {
                        value: legendre_recurrence(n, t)?,
                        fallback: true,
                    });
                }
                let s = ((1.0 - ta) * (1.0 + ta)).sqrt();
                Ok(Evaluated {
                    value: sign * self.combine(theta) / s.sqrt(),
                    fallback: false,
                })
            }
            SpecialKind::BesselJ => {
                let x = t / n as f64;
                if !self.phase.alpha.contains(x) {
                    return Err(Error::OutOfDomain { t, a: lo, b: hi });
                }
                Ok(Evaluated {
                    value: self.combine(x) / t.sqrt(),
                    fallback: false,
                })
            }
        }
    }
}

/// Evaluates the normalized target at every point.
pub fn eval_special(np: &NormalizedPhase, points: &[f64]) -> Result<Vec<f64>> {
    points.iter().map(|&t| np.eval(t).map(|e| e.value)).collect()
}

/// Oracle value for the family at `t`.
pub fn oracle(family: &SpecialFamily, t: f64) -> Result<f64> {
    match family.kind {
        SpecialKind::Legendre => legendre_recurrence(family.n, t),
        SpecialKind::BesselJ => bessel_backward(family.n, t, default_start_offset(t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_recurrence(0, 0.3).unwrap(), 1.0);
        assert_eq!(legendre_recurrence(1, 0.3).unwrap(), 0.3);
        assert!((legendre_recurrence(2, 0.5).unwrap() + 0.125).abs() < 1e-16);
        for n in [5, 50, 500] {
            assert!((legendre_recurrence(n, 1.0).unwrap() - 1.0).abs() < 1e-13);
        }
        assert!(matches!(legendre_recurrence(3, 1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn legendre_zero_closed_form() {
        for n in [0u64, 1, 2, 3, 10, 11, 100, 101] {
            let rec = legendre_recurrence(n, 0.0).unwrap();
            assert!((legendre_at_zero(n) - rec).abs() < 1e-14, "n={n}");
        }
        // asymptotic branch against the product just above the switch
        let prod: f64 = (1..=260u64).fold(1.0, |acc, k| acc * (2 * k - 1) as f64 / (2 * k) as f64);
        assert!((central_ratio(260) / prod - 1.0).abs() < 1e-13);
    }

    #[test]
    fn bessel_examples() {
        let j0 = bessel_backward(0, 1e-8, default_start_offset(1e-8)).unwrap();
        assert!((j0 - 1.0).abs() < 1e-8);
        let z = bessel_backward(0, 2.404825557695773, 20).unwrap();
        assert!(z.abs() < 1e-10);
        // J_1(1) = 0.44005058574493351596
        assert!((bessel_backward(1, 1.0, 20).unwrap() - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn bessel_deep_evanescent_underflows() {
        assert!(matches!(bessel_backward(2000, 1.0, 20), Err(Error::Underflow { .. })));
    }

    #[test]
    fn standard_form_examples() {
        for n in [3u64, 10, 1000] {
            let nf = n as f64;
            let f = standard_form_q(&SpecialFamily::bessel(n));
            let want = 0.75 + 1.0 / (16.0 * nf * nf);
            assert!((f.coefficient(2.0 * nf) - want).abs() < 1e-15);
            assert!((f.q(2.0) - want).abs() < 1e-15);
        }
        let f = standard_form_q(&SpecialFamily::legendre(7));
        assert!((f.coefficient(0.0) - 57.0).abs() < 1e-13);
        assert_eq!(f.weight(0.0), 1.0);
        assert!((f.q(0.0) * 56.0 - 57.0).abs() < 1e-12);
    }

    #[test]
    fn lambert_examples() {
        assert_eq!(lambert_w(LambertBranch::W0, 0.0).unwrap(), 0.0);
        assert!((lambert_w(LambertBranch::W0, E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(lambert_w(LambertBranch::Wm1, -1.0 / E).unwrap(), -1.0);
        assert!(matches!(lambert_w(LambertBranch::W0, -0.5), Err(Error::OutOfBranchDomain { .. })));
        assert!(matches!(lambert_w(LambertBranch::Wm1, 0.1), Err(Error::OutOfBranchDomain { .. })));
        for &y in &[-0.367, -0.3, -0.1, -1e-5, 1e-8, 0.5, 2.0, 10.0, 1e6, 1e300] {
            let w = lambert_w(LambertBranch::W0, y).unwrap();
            assert!((w * w.exp() - y).abs() <= 1e-14 * y.abs().max(1e-300) * (1.0 + w.abs()), "{y}");
        }
        for &y in &[-0.3678, -0.3, -0.1, -1e-5, -1e-100] {
            let w = lambert_w(LambertBranch::Wm1, y).unwrap();
            assert!(w <= -1.0);
            assert!((w * w.exp() - y).abs() <= 1e-14 * y.abs() * (1.0 + w.abs()), "{y}");
        }
    }

    #[test]
    fn connection_for_sine() {
        let pr = phase::make_problem(|_| 1.0, 1.0, -2.0, 2.0, 1e-14).unwrap();
        let lp = phase::solve_kummer_log(&pr, 1e-12, 4).unwrap();
        let ph = phase::build_phase(&lp, &pr, 0.0, 0.0).unwrap();
        let (c1, c2) = connection(&ph, 0.3, 0.3_f64.sin(), 0.3_f64.cos()).unwrap();
        assert!(c1.abs() < 1e-14 && (c2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_100_reproduces_center_value() {
        let fam = SpecialFamily::legendre(100);
        let np = NormalizedPhase::for_family(&fam).unwrap();
        let v = np.eval(0.0).unwrap();
        assert!(!v.fallback);
        assert!((v.value - legendre_at_zero(100)).abs() < 1e-12);
        for &t in &[-0.8, -0.31, 0.05, 0.5, 0.93] {
            let got = np.eval(t).unwrap().value;
            let want = legendre_recurrence(100, t).unwrap();
            assert!((got - want).abs() < 1e-12, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn bessel_1000_matches_held_out_points() {
        let fam = SpecialFamily::bessel(1000);
        let np = NormalizedPhase::for_family(&fam).unwrap();
        let at_ref = np.eval(2500.0).unwrap().value;
        assert!((at_ref - oracle(&fam, 2500.0).unwrap()).abs() < 1e-14);
        for i in 0..10 {
            let t = 2000.0 + 97.3 * i as f64 + 13.1;
            let got = np.eval(t).unwrap().value;
            let want = oracle(&fam, t).unwrap();
            assert!((got - want).abs() < 1e-11, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn half_order_phase_is_linear() {
        // psi'' + (1 - (nu^2 - 1/4)/t^2) psi = 0 with nu = 1/2 has q = 1
        let nu: f64 = 0.5;
        let q = move |t: f64| 1.0 - (nu * nu - 0.25) / (t * t);
        let pr = phase::make_problem(q, 1.0, 1.0, 10.0, 1e-14).unwrap();
        let lp = phase::solve_kummer_log(&pr, 1e-12, 4).unwrap();
        let ph = phase::build_phase(&lp, &pr, 1.0, 1.0).unwrap();
        for &t in &[1.0, 3.3, 7.0, 10.0] {
            assert!((ph.alpha_prime.eval(t).unwrap() - 1.0).abs() < 1e-14);
        }
        // sqrt(t) J_{1/2}(t) = sqrt(2/pi) sin t
        let amp = (2.0 / PI).sqrt();
        let (c1, c2) = connection(&ph, 4.0, amp * 4.0_f64.sin(), amp * 4.0_f64.cos()).unwrap();
        assert!(c1.abs() < 1e-13 && (c2 - amp).abs() < 1e-13);
    }
}
