//! Continuous problem definitions.
//!
//! A [`ProblemSpec`] carries the orders, tempering rate, domain, horizon and
//! the forcing; optionally an exact solution for error measurement. The
//! built-in manufactured problem has
//!
//! ```text
//!     u(x, t) = e^{-lambda t} t^3 x^2 (1-x)^2      on (0, 1) x (0, 1/2]
//! ```
//!
//! with the forcing derived analytically, so solver error is exactly
//! measurable. Only zero initial data is admitted; how nonzero data would
//! enter the time quadrature is deliberately left unsupported.

use alloc::boxed::Box;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// A function of space and time.
pub type SpaceTimeFn = dyn Fn(f64, f64) -> f64 + Send + Sync;
/// A function of space only.
pub type SpaceFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A continuous instance of the tempered diffusion-wave problem.
pub struct ProblemSpec {
    /// Space order, in (1, 2].
    pub alpha: f64,
    /// Time order, in (1, 2]; the quadrature acts at order `beta = gamma - 1`.
    pub gamma: f64,
    /// Tempering rate, >= 0.
    pub lambda: f64,
    /// Spatial interval (a, b).
    pub domain: (f64, f64),
    /// Final time T.
    pub horizon: f64,
    /// Source term f(x, t).
    pub forcing: Box<SpaceTimeFn>,
    /// Exact solution, when known.
    pub exact: Option<Box<SpaceTimeFn>>,
    /// Initial data; must be identically zero (checked at solve time).
    pub initial: Box<SpaceFn>,
}

impl ProblemSpec {
    pub fn beta(&self) -> f64 {
        self.gamma - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 1.0 && self.alpha <= 2.0) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: self.alpha,
                min: 1.0,
                max: 2.0,
            });
        }
        if !(self.gamma > 1.0 && self.gamma <= 2.0) {
            return Err(Error::OutOfRange {
                name: "gamma",
                value: self.gamma,
                min: 1.0,
                max: 2.0,
            });
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::InvalidArgument {
                name: "lambda",
                reason: "tempering rate must be >= 0",
            });
        }
        if !(self.domain.1 > self.domain.0) {
            return Err(Error::InvalidArgument {
                name: "domain",
                reason: "need a < b",
            });
        }
        if !(self.horizon > 0.0) {
            return Err(Error::InvalidArgument {
                name: "horizon",
                reason: "final time must be > 0",
            });
        }
        Ok(())
    }
}

impl core::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("gamma", &self.gamma)
            .field("lambda", &self.lambda)
            .field("domain", &self.domain)
            .field("horizon", &self.horizon)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

/// The exact manufactured solution `e^{-lambda t} t^3 x^2 (1-x)^2`.
pub fn manufactured_exact(x: f64, t: f64, lambda: f64) -> f64 {
    math::exp(-lambda * t) * t * t * t * x * x * (1.0 - x) * (1.0 - x)
}

/// The spatial bracket of the manufactured forcing: the exact Riesz
/// derivative of `x^2 (1-x)^2` up to the `kappa` factor,
///
/// ```text
///   2 (x^{2-α} + (1-x)^{2-α}) / Γ(3-α)
/// - 12 (x^{3-α} + (1-x)^{3-α}) / Γ(4-α)
/// + 24 (x^{4-α} + (1-x)^{4-α}) / Γ(5-α).
/// ```
///
/// Endpoints evaluate to the one-sided limits (the `2-α` powers vanish there
/// for α < 2, and `0^0 = 1` supplies the α = 2 limit).
pub fn exact_riesz_of_manufactured(x: f64, alpha: f64) -> f64 {
    let y = 1.0 - x;
    2.0 * (math::pow(x, 2.0 - alpha) + math::pow(y, 2.0 - alpha)) / math::gamma(3.0 - alpha)
        - 12.0 * (math::pow(x, 3.0 - alpha) + math::pow(y, 3.0 - alpha)) / math::gamma(4.0 - alpha)
        + 24.0 * (math::pow(x, 4.0 - alpha) + math::pow(y, 4.0 - alpha)) / math::gamma(5.0 - alpha)
}

/// The manufactured forcing: time-derivative part plus the tempered integral
/// of the Riesz derivative, both written out analytically.
pub fn manufactured_forcing(x: f64, t: f64, alpha: f64, gamma: f64, lambda: f64) -> f64 {
    let et = math::exp(-lambda * t);
    let shape = x * x * (x - 1.0) * (x - 1.0);
    let dt_part = (3.0 * et * t * t - lambda * et * t * t * t) * shape;
    let coeff = math::gamma(4.0) / (2.0 * math::gamma(3.0 + gamma) * math::cos(alpha * PI / 2.0));
    let memory_part =
        coeff * et * math::pow(t, 2.0 + gamma) * exact_riesz_of_manufactured(x, alpha);
    dt_part + memory_part
}

/// The manufactured problem on (0, 1) with horizon T = 1/2.
pub fn manufactured_problem(alpha: f64, gamma: f64, lambda: f64) -> Result<ProblemSpec> {
    let spec = ProblemSpec {
        alpha,
        gamma,
        lambda,
        domain: (0.0, 1.0),
        horizon: 0.5,
        forcing: Box::new(move |x, t| manufactured_forcing(x, t, alpha, gamma, lambda)),
        exact: Some(Box::new(move |x, t| manufactured_exact(x, t, lambda))),
        initial: Box::new(|_| 0.0),
    };
    spec.validate()?;
    Ok(spec)
}
