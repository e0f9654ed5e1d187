//! Core numerics for the space-time tempered fractional diffusion-wave
//! equation
//!
//! ```text
//!     du/dt = I_t^{gamma-1,lambda}  D_x^alpha  u + f,      1 < alpha, gamma <= 2,
//! ```
//!
//! where `I_t^{beta,lambda}` is the tempered fractional integral in time and
//! `D_x^alpha` the Riesz fractional derivative in space, on an interval with
//! homogeneous Dirichlet boundaries and zero initial data. The discretization
//! is second order in both time and space: a tempered convolution quadrature
//! in time (midpoint/Crank-Nicolson flavour) combined with a second-order
//! Riesz stencil assembled as a symmetric Toeplitz operator.
//!
//! Module map:
//!
//! - [`kernels`] — scalar coefficient sequences: Riesz weights, Grünwald
//!   factors, tempered quadrature weights, generating-function values.
//! - [`operators`] — the discrete Riesz operator as a symmetric Toeplitz
//!   matrix over interior grid points.
//! - [`solver`] — the implicit time march: one prefactored SPD solve per step
//!   plus a convolution over the stored operator history.
//! - [`problems`] — continuous problem definitions, including the
//!   manufactured solution with exact forcing.
//! - [`analysis`] — error norms, convergence studies, and executable
//!   positivity / semi-definiteness / stability checks.
//! - [`quadrature`] — adaptive Gauss-Kronrod reference evaluation of the
//!   tempered integral, used by the verification paths.
//!
//! The crate is `no_std` (with `alloc`); all float transcendentals go through
//! `libm`, so results are bit-identical across targets. Everything here is a
//! pure function of its inputs: distinct solves are independent and safe to
//! run on separate threads.

#![cfg_attr(not(test), no_std)]
// Range checks are written as negated comparisons (`!(x > 0.0)`) so that NaN
// arguments fail validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod kernels;
mod linalg;
mod math;
pub mod operators;
pub mod problems;
pub mod quadrature;
mod rng;
pub mod solver;

pub use error::{Error, Result};
pub use linalg::SpdFactor;
