//! The self-contained verification suites behind `tfdw verify`: coefficient
//! oracle equivalence, weight positivity, generating-symbol nonnegativity,
//! weight-matrix semi-definiteness, unconditional stability, and the
//! quadrature order. No network, no external data; a few seconds optimized.

use tfdw_core::analysis::{build_l_matrix, psd_check, stability_experiment};
use tfdw_core::kernels::{generating_fn_value, tempered_coeffs, tempered_coeffs_oracle};
use tfdw_core::quadrature::tempered_integral;

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

const BETAS: [f64; 4] = [0.1, 0.3, 0.7, 1.0];
const LAMBDAS: [f64; 3] = [0.0, 0.1, 1.0];
const TAUS: [f64; 2] = [1.0 / 20.0, 1.0 / 160.0];

fn oracle_equivalence() -> Check {
    let mut worst = 0.0f64;
    for beta in BETAS {
        for lambda in LAMBDAS {
            for tau in TAUS {
                let closed = tempered_coeffs(beta, lambda, tau, 512).unwrap();
                let series = tempered_coeffs_oracle(beta, lambda, tau, 512).unwrap();
                for k in 0..512 {
                    let rel = (closed.l[k] - series.l[k]).abs()
                        / series.l[k].abs().max(f64::MIN_POSITIVE);
                    worst = worst.max(rel);
                }
            }
        }
    }
    Check {
        name: "oracle-equivalence",
        pass: worst <= 1e-13,
        detail: format!("max relative gap {worst:.3e} (limit 1e-13, 24 combinations, k < 512)"),
    }
}

fn weight_positivity() -> Check {
    let mut min_seen = f64::INFINITY;
    for beta in BETAS {
        for lambda in LAMBDAS {
            for tau in TAUS {
                let c = tempered_coeffs(beta, lambda, tau, 10_001).unwrap();
                min_seen = c.l.iter().fold(min_seen, |acc, &l| acc.min(l));
            }
        }
    }
    Check {
        name: "weight-positivity",
        pass: min_seen >= 0.0,
        detail: format!("min l_k = {min_seen:.3e} over k <= 10^4, 24 combinations"),
    }
}

fn symbol_nonnegativity() -> Check {
    let mut min_seen = f64::INFINITY;
    for beta in BETAS {
        for lambda in LAMBDAS {
            for tau in TAUS {
                for j in 1..=200 {
                    let x = std::f64::consts::PI * j as f64 / 200.0;
                    min_seen = min_seen.min(generating_fn_value(beta, lambda * tau, x));
                }
            }
        }
    }
    Check {
        name: "symbol-nonnegativity",
        pass: min_seen >= -1e-12,
        detail: format!(
            "min f(beta, x) = {min_seen:.3e} on 200 samples of (0, pi] per combination"
        ),
    }
}

fn weight_matrix_psd() -> Check {
    let mut worst = f64::INFINITY;
    for n in [16usize, 64, 256] {
        for beta in [0.1, 0.5, 1.0] {
            for lambda_tau in [0.0, 0.0025, 0.1] {
                let c = tempered_coeffs(beta, lambda_tau, 1.0, n + 1).unwrap();
                let rep = psd_check(&build_l_matrix(&c, n).unwrap());
                worst = worst.min(rep.min_eigenvalue / c.l[0]);
            }
        }
    }
    Check {
        name: "weight-matrix-psd",
        pass: worst >= -1e-10,
        detail: format!("min eigenvalue / l_0 = {worst:.3e} (limit -1e-10, N up to 256)"),
    }
}

fn stability_sweep(seed: u64) -> Check {
    let m = 32;
    let steps = 64;
    let mut worst = 0.0f64;
    for alpha in [1.1, 1.5, 2.0] {
        for gamma in [1.1, 1.5, 2.0] {
            for ratio in [0.1, 1.0, 10.0] {
                for offset in 0..3u64 {
                    let tau = ratio / m as f64;
                    let norms = stability_experiment(
                        alpha,
                        gamma,
                        0.1,
                        m,
                        steps,
                        tau,
                        seed.wrapping_add(offset),
                    )
                    .unwrap();
                    for &n in &norms {
                        worst = worst.max(n / norms[0]);
                    }
                }
            }
        }
    }
    Check {
        name: "stability",
        pass: worst <= 1.0 + 1e-12,
        detail: format!("max ||eps^n||/||eps^0|| = {worst:.15} over 81 homogeneous marches"),
    }
}

fn quadrature_order() -> Check {
    let v = |t: f64| t * t * t * (-t).exp();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for beta in [0.3, 0.7, 1.0] {
        for lambda in [0.0, 0.5] {
            let reference = tempered_integral(v, beta, lambda, 1.0, 1e-12).unwrap();
            let mut errors = Vec::new();
            for n in [32usize, 64, 128, 256] {
                let tau = 1.0 / n as f64;
                let c = tempered_coeffs(beta, lambda, tau, n + 1).unwrap();
                let sum: f64 = (0..=n).map(|k| c.l[k] * v(1.0 - k as f64 * tau)).sum();
                errors.push((tau.powf(beta) * sum - reference).abs());
            }
            for w in errors.windows(2) {
                let ratio = w[0] / w[1];
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            }
        }
    }
    Check {
        name: "quadrature-order",
        pass: lo >= 3.6 && hi <= 4.4,
        detail: format!("halving ratios in [{lo:.3}, {hi:.3}] (required within [3.6, 4.4])"),
    }
}

/// Run every suite, print one line per check, and report overall success.
pub fn run(seed: u64) -> bool {
    let checks = [
        oracle_equivalence(),
        weight_positivity(),
        symbol_nonnegativity(),
        weight_matrix_psd(),
        stability_sweep(seed),
        quadrature_order(),
    ];
    let mut all = true;
    for check in &checks {
        println!(
            "{}  {} — {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
        all &= check.pass;
    }
    println!(
        "verify: {}/{} checks passed",
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    );
    all
}
