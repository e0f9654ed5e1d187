//! CSV and JSON emission. Floats are printed with 17 significant digits
//! (`{:.16e}`) so a round-trip through the files loses nothing.

use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::params::{Params, Record};
use crate::AppError;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `--output-path` is a stem: `out` (or `out.csv`, `out.json`) becomes
/// `out.csv` + `out.json`. Extensions are appended textually so dotted stems
/// like `results-v1.2` survive intact.
pub fn output_paths(path: &Path) -> (PathBuf, PathBuf) {
    let raw = path.to_string_lossy();
    let stem = raw
        .strip_suffix(".csv")
        .or_else(|| raw.strip_suffix(".json"))
        .unwrap_or(&raw);
    (
        PathBuf::from(format!("{stem}.csv")),
        PathBuf::from(format!("{stem}.json")),
    )
}

pub struct Artifacts {
    pub csv: String,
    pub record_json: String,
}

pub fn render_record<R: Serialize>(
    params: &Params,
    rows: &[R],
    wall_ms: u64,
) -> Result<String, AppError> {
    let record = Record {
        params,
        rows,
        wall_ms,
        version: env!("CARGO_PKG_VERSION"),
    };
    let mut json = serde_json::to_string_pretty(&record)
        .map_err(|e| AppError::Runtime(format!("serializing run record: {e}")))?;
    json.push('\n');
    Ok(json)
}

/// Write `<stem>.csv` and `<stem>.json`, or print the selected format to
/// stdout when no path was given.
pub fn emit(
    artifacts: &Artifacts,
    output_path: Option<&Path>,
    format: &str,
) -> Result<(), AppError> {
    match output_path {
        Some(path) => {
            let (csv_path, json_path) = output_paths(path);
            write_file(&csv_path, &artifacts.csv)?;
            write_file(&json_path, &artifacts.record_json)?;
            println!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(())
        }
        None => {
            let out = match format {
                "json" => &artifacts.record_json,
                _ => &artifacts.csv,
            };
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.as_bytes())
                .map_err(|e| AppError::Runtime(format!("writing stdout: {e}")))?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    std::fs::write(path, contents)
        .map_err(|e| AppError::Runtime(format!("writing {}: {e}", path.display())))
}
