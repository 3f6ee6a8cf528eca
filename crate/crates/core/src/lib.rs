//! Nonoscillatory phase functions for `y'' + lambda^2 q(t) y = 0`.
//!
//! The crate builds phase functions `alpha` with `alpha' > 0` such that
//! `cos(alpha) / sqrt(alpha')` and `sin(alpha) / sqrt(alpha')` span the
//! solution space, and uses them to evaluate Legendre polynomials and Bessel
//! functions of very large order at a cost independent of the order.
//!
//! * [`cheb`]: Chebyshev fitting, evaluation, differentiation and integration.
//! * [`phase`]: Newton iteration on the logarithm form of Kummer's equation.
//! * [`fourier`]: the band-limited fixed-point formulation on a frequency grid.
//! * [`specfun`]: recurrence oracles, Lambert W, and phase-based evaluators.
//! * [`backwards`]: backward-error and perturbation checks.

pub mod backwards;
pub mod cheb;
pub mod error;
pub mod fourier;
pub mod phase;
pub mod specfun;

pub use cheb::ChebSeries;
pub use error::{Error, Result};
pub use num_complex;
