//! Scalar coefficient sequences of the discretization.
//!
//! Three families live here:
//!
//! - the second-order Riesz stencil weights `w_m` together with the constant
//!   `kappa = 1/(2 cos(alpha*pi/2))` and the Γ(4−α) normalization,
//! - the Grünwald factors `g_m`, the Taylor coefficients of `(1-z)^{-beta}`,
//! - the tempered quadrature weights `l_k` whose generating function is
//!   `(1 - z e^{-lambda tau})^{-beta} (1 + (1 - z e^{-lambda tau})/2)^{-beta}`.
//!
//! The closed-form summation is the production path for `l_k`; the truncated
//! series-product route ([`tempered_coeffs_oracle`]) is kept as an independent
//! cross-check used by the verification suite.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// Weights of the second-order Riesz derivative stencil, plus the constants
/// the assembled operator needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszStencil {
    /// Fractional order, in (1, 2].
    pub alpha: f64,
    /// `1 / (2 cos(alpha*pi/2))`; negative on the whole admissible range.
    pub kappa: f64,
    /// Γ(4−α). The full operator scale `-kappa / (Γ(4−α) h^α)` is applied by
    /// the operator assembly, not here.
    pub gamma_scale: f64,
    /// `w_0, w_1, ..., w_{count-1}`.
    pub weights: Vec<f64>,
}

/// Taylor coefficients of `(1-z)^{-beta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrunwaldSeq {
    pub beta: f64,
    pub g: Vec<f64>,
}

/// Tempered quadrature weights `l_0, ..., l_{count-1}` for a given
/// `(beta, lambda, tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperedCoeffs {
    pub beta: f64,
    pub lambda: f64,
    pub tau: f64,
    pub l: Vec<f64>,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

fn check_lambda_tau(lambda: f64, tau: f64) -> Result<()> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "lambda",
            reason: "tempering rate must be >= 0",
        });
    }
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument {
            name: "tau",
            reason: "time step must be > 0",
        });
    }
    Ok(())
}

/// Riesz stencil weights `w_0 .. w_{count-1}` for order `alpha` in (1, 2].
///
/// `w_0 = 1`, `w_1 = -4 + 2^{3-α}`, `w_2 = 6 - 2^{5-α} + 3^{3-α}`, and for
/// m ≥ 3 the five-term difference of `(m+j)^{3-α}` powers. The base-2 powers
/// go through `exp2`, which is exact on integer arguments, so at `alpha = 2`
/// the stencil collapses to `[1, -2, 1, 0, ...]` bit-exactly.
pub fn riesz_weights(alpha: f64, count: usize) -> Result<RieszStencil> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            min: 1.0,
            max: 2.0,
        });
    }
    if count < 4 {
        return Err(Error::InvalidArgument {
            name: "count",
            reason: "need at least 4 stencil weights",
        });
    }
    let p = 3.0 - alpha;
    let mut weights = Vec::with_capacity(count);
    weights.push(1.0);
    weights.push(-4.0 + math::exp2(3.0 - alpha));
    weights.push(6.0 - math::exp2(5.0 - alpha) + math::pow(3.0, 3.0 - alpha));
    for m in 3..count {
        let m = m as f64;
        weights.push(
            math::pow(m + 1.0, p) - 4.0 * math::pow(m, p) + 6.0 * math::pow(m - 1.0, p)
                - 4.0 * math::pow(m - 2.0, p)
                + math::pow(m - 3.0, p),
        );
    }
    Ok(RieszStencil {
        alpha,
        kappa: 1.0 / (2.0 * math::cos(alpha * PI / 2.0)),
        gamma_scale: math::gamma(4.0 - alpha),
        weights,
    })
}

/// Grünwald coefficients `g_0 .. g_{count-1}` of `(1-z)^{-beta}` by the
/// multiplicative recursion `g_m = g_{m-1} (m-1+beta)/m`, which stays stable
/// for m in the thousands where Γ-quotients would overflow.
pub fn grunwald_coeffs(beta: f64, count: usize) -> Result<GrunwaldSeq> {
    if count == 0 {
        return Err(Error::InvalidArgument {
            name: "count",
            reason: "need at least one coefficient",
        });
    }
    let mut g = Vec::with_capacity(count);
    g.push(1.0);
    for m in 1..count {
        let m = m as f64;
        let prev = g[g.len() - 1];
        g.push(prev * (m - 1.0 + beta) / m);
    }
    Ok(GrunwaldSeq { beta, g })
}

/// Tempered quadrature weights by the closed form
/// `l_k = e^{-lambda k tau} (3/2)^{-beta} sum_{m=0..k} 3^{-m} g_m g_{k-m}`.
///
/// The inner sum runs m from k down to 0 (summands decay like 3^{-m}), the
/// `(3/2)^{-beta}` factor is applied next, and the exponential damping is the
/// final multiplication. That last point makes the tempering identity
/// `l_k(lambda) = e^{-lambda k tau} * l_k(0)` hold bit-exactly.
pub fn tempered_coeffs(beta: f64, lambda: f64, tau: f64, count: usize) -> Result<TemperedCoeffs> {
    check_beta(beta)?;
    check_lambda_tau(lambda, tau)?;
    if count == 0 {
        return Err(Error::InvalidArgument {
            name: "count",
            reason: "need at least one coefficient",
        });
    }
    let g = grunwald_coeffs(beta, count)?.g;
    // 3^{-m} for m = 0..count, by repeated division.
    let mut pow3 = Vec::with_capacity(count);
    pow3.push(1.0);
    for m in 1..count {
        let prev = pow3[m - 1];
        pow3.push(prev / 3.0);
    }
    let scale = math::pow(1.5, -beta);
    let mut l = Vec::with_capacity(count);
    for k in 0..count {
        let mut inner = 0.0;
        for m in (0..=k).rev() {
            inner += pow3[m] * g[m] * g[k - m];
        }
        let undamped = scale * inner;
        let damp = math::exp(-(k as f64) * lambda * tau);
        l.push(damp * undamped);
    }
    Ok(TemperedCoeffs {
        beta,
        lambda,
        tau,
        l,
    })
}

/// Reference computation of the same weights by truncated power-series
/// multiplication of the two generating-function factors, each expanded on
/// its own with per-factor damping. O(count^2); used by the verification
/// suite, never by the solver.
pub fn tempered_coeffs_oracle(
    beta: f64,
    lambda: f64,
    tau: f64,
    count: usize,
) -> Result<TemperedCoeffs> {
    check_beta(beta)?;
    check_lambda_tau(lambda, tau)?;
    if count == 0 || count > 4096 {
        return Err(Error::InvalidArgument {
            name: "count",
            reason: "oracle supports 1..=4096 coefficients",
        });
    }
    let g = grunwald_coeffs(beta, count)?.g;
    // (1 - z e^{-lambda tau})^{-beta}
    let factor_a: Vec<f64> = (0..count)
        .map(|k| g[k] * math::exp(-lambda * tau * k as f64))
        .collect();
    // (3/2)^{-beta} (1 - z e^{-lambda tau}/3)^{-beta}
    let scale = math::pow(1.5, -beta);
    let factor_b: Vec<f64> = (0..count)
        .map(|k| scale * g[k] * math::exp(-lambda * tau * k as f64) * math::pow(3.0, -(k as f64)))
        .collect();
    let mut l = Vec::with_capacity(count);
    for k in 0..count {
        let mut sum = 0.0;
        for m in 0..=k {
            sum += factor_a[m] * factor_b[k - m];
        }
        l.push(sum);
    }
    Ok(TemperedCoeffs {
        beta,
        lambda,
        tau,
        l,
    })
}

#[derive(Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn mul(self, other: Self) -> Self {
        Self::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }

    /// Principal branch of `z^p`.
    fn powf(self, p: f64) -> Self {
        let modulus = math::hypot(self.re, self.im);
        let arg = math::atan2(self.im, self.re);
        let mag = math::exp(p * math::ln(modulus));
        Self::new(mag * math::cos(p * arg), mag * math::sin(p * arg))
    }
}

/// Symbol of the quadrature-weight Toeplitz matrix:
/// `f(beta, x) = (l(e^{ix}) + l(e^{-ix})) / 2` with `l` the two-factor
/// generating function evaluated at `z e^{-lambda tau}`.
///
/// Returns `+inf` at the pole `lambda_tau = 0, x = 0` (the untempered series
/// diverges there). Elsewhere the conjugate pair cancels the imaginary part;
/// a residue above 1e-12 would mean the complex evaluation is broken, so it
/// is asserted.
pub fn generating_fn_value(beta: f64, lambda_tau: f64, x: f64) -> f64 {
    if lambda_tau == 0.0 && x == 0.0 {
        return f64::INFINITY;
    }
    let damp = math::exp(-lambda_tau);
    let half = |x: f64| -> Complex {
        let w = Complex::new(damp * math::cos(x), damp * math::sin(x));
        let c1 = Complex::new(1.0 - w.re, -w.im);
        let c2 = Complex::new(1.5 - 0.5 * w.re, -0.5 * w.im);
        c1.powf(-beta).mul(c2.powf(-beta))
    };
    let plus = half(x);
    let minus = half(-x);
    let value = Complex::new(0.5 * (plus.re + minus.re), 0.5 * (plus.im + minus.im));
    assert!(
        value.im.abs() <= 1e-12,
        "imaginary residue {} exceeds 1e-12",
        value.im
    );
    value.re
}
