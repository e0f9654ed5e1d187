//! Error norms, observed-order studies, and the executable versions of the
//! scheme's structural guarantees: quadrature-weight positivity, positive
//! semi-definiteness of the weight Toeplitz matrix, and unconditional
//! stability of the homogeneous march.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernels::TemperedCoeffs;
use crate::linalg::symmetric_eigenvalues;
use crate::math;
use crate::operators::SymToeplitz;
use crate::problems::ProblemSpec;
use crate::rng::SplitMix64;
use crate::solver::{Discretization, Scheme};

/// Max and discrete-L2 error over interior nodes at one time level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub max_error: f64,
    /// `(h sum_i e_i^2)^{1/2}`.
    pub l2_error: f64,
    /// (M, N) the errors were measured at.
    pub resolution: (usize, usize),
}

/// Compare a numeric field against the exact solution sampled on the same
/// interior nodes.
pub fn error_report(
    numeric: &[f64],
    exact: &[f64],
    h: f64,
    resolution: (usize, usize),
) -> Result<ErrorReport> {
    if numeric.len() != exact.len() {
        return Err(Error::DimensionMismatch {
            expected: exact.len(),
            got: numeric.len(),
        });
    }
    let mut max_error = 0.0f64;
    let mut sq = 0.0f64;
    for (n, e) in numeric.iter().zip(exact.iter()) {
        let d = (n - e).abs();
        max_error = max_error.max(d);
        sq += d * d;
    }
    Ok(ErrorReport {
        max_error,
        l2_error: math::sqrt(h * sq),
        resolution,
    })
}

/// Errors of one resolution of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionSample {
    pub m: usize,
    pub n: usize,
    pub tau: f64,
    pub h: f64,
    /// Max-norm error at the final time.
    pub max_error: f64,
    /// Max-norm error over every time level (diagnostic).
    pub all_time_max_error: f64,
    /// Discrete-L2 error at the final time.
    pub l2_error: f64,
}

/// One row of the convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub h: f64,
    pub max_error: f64,
    pub all_time_max_error: f64,
    /// `log2(err_prev / err)` under simultaneous halving; absent on the
    /// coarsest row.
    pub rate: Option<f64>,
}

/// Rows ordered by decreasing `tau`, with observed orders from row 2 on.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn from_samples(mut samples: Vec<ResolutionSample>) -> Self {
        samples.sort_by(|a, b| b.tau.partial_cmp(&a.tau).unwrap());
        let mut rows = Vec::with_capacity(samples.len());
        for (i, s) in samples.iter().enumerate() {
            let rate = if i == 0 {
                None
            } else {
                let prev = samples[i - 1].max_error;
                Some(math::ln(prev / s.max_error) / math::ln(2.0))
            };
            rows.push(ConvergenceRow {
                tau: s.tau,
                h: s.h,
                max_error: s.max_error,
                all_time_max_error: s.all_time_max_error,
                rate,
            });
        }
        Self { rows }
    }

    /// Least-squares slope of `log2(max_error)` against `log2(tau)`.
    pub fn fitted_order(&self) -> f64 {
        let n = self.rows.len() as f64;
        let xs: Vec<f64> = self.rows.iter().map(|r| math::ln(r.tau)).collect();
        let ys: Vec<f64> = self.rows.iter().map(|r| math::ln(r.max_error)).collect();
        let mean_x = xs.iter().sum::<f64>() / n;
        let mean_y = ys.iter().sum::<f64>() / n;
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, y) in xs.iter().zip(ys.iter()) {
            num += (x - mean_x) * (y - mean_y);
            den += (x - mean_x) * (x - mean_x);
        }
        num / den
    }
}

/// Solve the problem at one (M, N) resolution and measure errors against its
/// exact solution, per time level and at the final time.
pub fn resolution_sample(problem: &ProblemSpec, m: usize, n: usize) -> Result<ResolutionSample> {
    let exact = problem.exact.as_ref().ok_or(Error::InvalidArgument {
        name: "problem",
        reason: "convergence study needs an exact solution",
    })?;
    let disc = Discretization::new(problem, m, n)?;
    let nodes = disc.interior_nodes();
    let scheme = Scheme::build(
        problem.alpha,
        problem.gamma,
        problem.lambda,
        problem.domain,
        m,
        disc.tau(),
        n,
    )?;
    let mut state = scheme.initial_state(vec![0.0; nodes.len()])?;
    let mut forcing = vec![0.0; nodes.len()];
    let mut all_time_max = 0.0f64;
    let mut final_report = None;
    for step in 0..n {
        let t_mid = (step as f64 + 0.5) * disc.tau();
        for (f, &x) in forcing.iter_mut().zip(nodes.iter()) {
            *f = (problem.forcing)(x, t_mid);
        }
        scheme.step(&mut state, Some(&forcing))?;
        let t = disc.time(step + 1);
        let exact_field: Vec<f64> = nodes.iter().map(|&x| exact(x, t)).collect();
        let report = error_report(state.u(), &exact_field, disc.h(), (m, n))?;
        all_time_max = all_time_max.max(report.max_error);
        if step + 1 == n {
            final_report = Some(report);
        }
    }
    let report = final_report.expect("n >= 1 is enforced by Discretization");
    Ok(ResolutionSample {
        m,
        n,
        tau: disc.tau(),
        h: disc.h(),
        max_error: report.max_error,
        all_time_max_error: all_time_max,
        l2_error: report.l2_error,
    })
}

/// Run the problem over a family of (M, N) resolutions and assemble the
/// convergence table.
pub fn convergence_study(
    problem: &ProblemSpec,
    resolutions: &[(usize, usize)],
) -> Result<ConvergenceReport> {
    if resolutions.len() < 2 {
        return Err(Error::InvalidArgument {
            name: "resolutions",
            reason: "need at least two resolutions",
        });
    }
    let mut samples = Vec::with_capacity(resolutions.len());
    for &(m, n) in resolutions {
        samples.push(resolution_sample(problem, m, n)?);
    }
    Ok(ConvergenceReport::from_samples(samples))
}

/// The (N+1)x(N+1) symmetric Toeplitz matrix with first row
/// `[l_0, l_1/2, ..., l_N/2]`, whose positive semi-definiteness
/// is what makes the homogeneous march unconditionally stable.
#[derive(Debug, Clone, PartialEq)]
pub struct LBetaMatrix {
    pub matrix: SymToeplitz,
}

pub fn build_l_matrix(coeffs: &TemperedCoeffs, n: usize) -> Result<LBetaMatrix> {
    if coeffs.l.len() < n + 1 {
        return Err(Error::InsufficientCoefficients {
            needed: n + 1,
            got: coeffs.l.len(),
        });
    }
    let mut first_row = Vec::with_capacity(n + 1);
    first_row.push(coeffs.l[0]);
    for k in 1..=n {
        first_row.push(0.5 * coeffs.l[k]);
    }
    Ok(LBetaMatrix {
        matrix: SymToeplitz::new(first_row),
    })
}

/// Eigenvalue evidence for positive semi-definiteness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub max_abs_eigenvalue: f64,
    /// `min_eigenvalue >= -1e-10 * max_abs_eigenvalue`.
    pub is_psd: bool,
}

pub fn psd_check(l: &LBetaMatrix) -> PsdReport {
    let n = l.matrix.dim();
    let eigs = symmetric_eigenvalues(l.matrix.to_dense(), n);
    let min = eigs[0];
    let max_abs = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    PsdReport {
        min_eigenvalue: min,
        max_abs_eigenvalue: max_abs,
        is_psd: min >= -1e-10 * max_abs,
    }
}

/// March the homogeneous scheme from a random perturbation and return the
/// discrete-L2 norm at every step (index 0 = the initial perturbation).
/// Unconditional stability means none of them exceeds the first.
pub fn stability_experiment(
    alpha: f64,
    gamma: f64,
    lambda: f64,
    m: usize,
    n: usize,
    tau: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    let h = 1.0 / m as f64;
    let scheme = Scheme::build(alpha, gamma, lambda, (0.0, 1.0), m, tau, n)?;
    let mut rng = SplitMix64::new(seed);
    let eps0: Vec<f64> = (0..m - 1).map(|_| rng.next_symmetric()).collect();
    let mut state = scheme.initial_state(eps0)?;
    let l2 = |u: &[f64]| math::sqrt(h * u.iter().map(|v| v * v).sum::<f64>());
    let mut norms = Vec::with_capacity(n + 1);
    norms.push(l2(state.u()));
    for _ in 0..n {
        scheme.step(&mut state, None)?;
        norms.push(l2(state.u()));
    }
    Ok(norms)
}
