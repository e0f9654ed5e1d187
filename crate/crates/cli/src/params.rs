//! Resolved run parameters and the JSON run record.
//!
//! Every subcommand resolves its flags (or a `--config` record) into a
//! [`Params`] value before doing any work; the same struct is embedded in the
//! JSON record each run writes, so a record can be re-fed as configuration
//! and reproduce the run byte for byte.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::AppError;

pub const DEFAULT_ALPHA: f64 = 1.5;
pub const DEFAULT_GAMMA: f64 = 2.0;
pub const DEFAULT_LAMBDA: f64 = 0.1;
pub const DEFAULT_T_FINAL: f64 = 0.5;
pub const DEFAULT_M: usize = 20;
pub const DEFAULT_N: usize = 10;
pub const DEFAULT_RESOLUTIONS: [usize; 4] = [20, 40, 80, 160];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Params {
    pub subcommand: String,
    pub problem: String,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub m: usize,
    pub n: usize,
    pub t_final: f64,
    pub domain: [f64; 2],
    pub resolutions: Vec<usize>,
    pub output_format: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl Params {
    pub fn base(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            problem: "manufactured".to_string(),
            alpha: DEFAULT_ALPHA,
            gamma: DEFAULT_GAMMA,
            lambda: DEFAULT_LAMBDA,
            m: DEFAULT_M,
            n: DEFAULT_N,
            t_final: DEFAULT_T_FINAL,
            domain: [0.0, 1.0],
            resolutions: DEFAULT_RESOLUTIONS.to_vec(),
            output_format: "csv".to_string(),
            seed: 0,
            kind: None,
            beta: None,
            tau: None,
            count: None,
        }
    }

    /// Flag-level validation; messages name the offending flag.
    pub fn validate(&self) -> Result<(), AppError> {
        let usage = |msg: String| Err(AppError::Usage(msg));
        check_output_format(&self.output_format)?;
        if self.problem != "manufactured" {
            return usage(format!(
                "--problem: unknown problem '{}' (available: manufactured)",
                self.problem
            ));
        }
        if !(self.alpha > 1.0 && self.alpha <= 2.0) {
            return usage(format!("--alpha: {} must lie in (1, 2]", self.alpha));
        }
        if !(self.gamma > 1.0 && self.gamma <= 2.0) {
            return usage(format!("--gamma: {} must lie in (1, 2]", self.gamma));
        }
        if !(self.lambda >= 0.0) {
            return usage(format!("--lambda: {} must be >= 0", self.lambda));
        }
        if !(self.t_final > 0.0) {
            return usage(format!("--t-final: {} must be > 0", self.t_final));
        }
        if self.domain != [0.0, 1.0] {
            return usage("--domain: the manufactured problem is defined on 0,1".to_string());
        }
        match self.subcommand.as_str() {
            "solve" => {
                if self.m < 3 {
                    return usage(format!("--m: {} must be >= 3", self.m));
                }
                if self.n == 0 {
                    return usage("--n: need at least one time step".to_string());
                }
            }
            "converge" => {
                if self.resolutions.len() < 2 {
                    return usage("--resolutions: need at least two entries".to_string());
                }
                if self.resolutions.windows(2).any(|w| w[1] <= w[0]) {
                    return usage("--resolutions: entries must be strictly increasing".to_string());
                }
                for &r in &self.resolutions {
                    self.steps_for_resolution(r)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// `h = tau` coupling: resolution R means M = R and N = T * R / (b - a),
    /// which must come out integral.
    pub fn steps_for_resolution(&self, r: usize) -> Result<usize, AppError> {
        if r < 3 {
            return Err(AppError::Usage(format!("--resolutions: {r} must be >= 3")));
        }
        let width = self.domain[1] - self.domain[0];
        let steps = self.t_final * r as f64 / width;
        let rounded = steps.round();
        if rounded < 1.0 || (steps - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(AppError::Usage(format!(
                "--resolutions: h = tau requires T*R/(b-a) integral; R = {r} with T = {} gives {steps}",
                self.t_final
            )));
        }
        Ok(rounded as usize)
    }
}

pub fn check_output_format(format: &str) -> Result<(), AppError> {
    match format {
        "csv" | "json" => Ok(()),
        other => Err(AppError::Usage(format!(
            "--output-format: unknown format '{other}' (available: csv, json)"
        ))),
    }
}

/// The JSON run record: everything needed to reproduce and audit a run.
#[derive(Debug, Serialize)]
pub struct Record<'a, R: Serialize> {
    pub params: &'a Params,
    pub rows: &'a [R],
    pub wall_ms: u64,
    pub version: &'a str,
}

#[derive(Debug, Deserialize)]
struct RecordParams {
    params: Params,
}

/// Load the `params` block from a run record (or a bare params object).
pub fn load_config(path: &Path) -> Result<Params, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Runtime(format!("--config {}: {e}", path.display())))?;
    if let Ok(record) = serde_json::from_str::<RecordParams>(&text) {
        return Ok(record.params);
    }
    serde_json::from_str::<Params>(&text).map_err(|e| {
        AppError::Usage(format!(
            "--config {}: not a run record: {e}",
            path.display()
        ))
    })
}
