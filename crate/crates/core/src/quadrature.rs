//! Adaptive Gauss-Kronrod 7/15 quadrature, plus a reference evaluation of the
//! tempered fractional integral
//!
//! ```text
//!     I^{beta,lambda} v (t) = 1/Γ(beta) ∫_0^t (t-s)^{beta-1} e^{-lambda(t-s)} v(s) ds.
//! ```
//!
//! The weakly singular kernel is removed by the substitution `y = (t-s)^beta`,
//! after which plain bisection-adaptive GK15 reaches absolute tolerances down
//! to ~1e-13. This is the independent reference the quadrature-order checks
//! compare the discrete convolution against; the solver never calls it.

use crate::error::{Error, Result};
use crate::math;

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK constants, kept at the
// published 33-digit precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of per-panel |Kronrod - Gauss| estimates over accepted panels.
    pub error_estimate: f64,
    /// Number of GK15 panel evaluations.
    pub panels: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_kronrod = WGK[7] * fc;
    let mut result_gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        result_kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (
        result_kronrod * half,
        ((result_kronrod - result_gauss) * half).abs(),
    )
}

/// Integrate `f` over `[a, b]` to absolute tolerance `abs_tol` by recursive
/// bisection with GK15 panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> QuadResult {
    assert!(abs_tol > 0.0, "tolerance must be positive");
    let mut out = QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        panels: 0,
    };
    adapt(&f, a, b, abs_tol, 0, &mut out);
    out
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize, out: &mut QuadResult) {
    let (value, err) = gk15(f, a, b);
    out.panels += 1;
    // The |K - G| gap overestimates the Kronrod error; accepting at tol keeps
    // the true error comfortably below it.
    if err <= tol || depth >= 52 {
        out.value += value;
        out.error_estimate += err;
        return;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1, out);
    adapt(f, mid, b, 0.5 * tol, depth + 1, out);
}

/// Reference value of the tempered fractional integral of `v` at time `t`.
///
/// Uses the substitution `y = (t-s)^beta`:
/// `I = 1/Γ(beta+1) ∫_0^{t^beta} e^{-lambda y^{1/beta}} v(t - y^{1/beta}) dy`,
/// whose integrand is bounded, so the endpoint singularity never enters.
pub fn tempered_integral<F: Fn(f64) -> f64>(
    v: F,
    beta: f64,
    lambda: f64,
    t: f64,
    abs_tol: f64,
) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            min: 0.0,
            max: 1.0,
        });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument {
            name: "t",
            reason: "time must be > 0",
        });
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "lambda",
            reason: "tempering rate must be >= 0",
        });
    }
    let inv_beta = 1.0 / beta;
    let upper = math::pow(t, beta);
    let integrand = |y: f64| {
        let w = if y <= 0.0 {
            0.0
        } else {
            math::pow(y, inv_beta)
        };
        math::exp(-lambda * w) * v(t - w)
    };
    let q = integrate(integrand, 0.0, upper, abs_tol);
    Ok(q.value / math::gamma(beta + 1.0))
}
