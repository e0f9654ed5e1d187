//! End-to-end tests of the `tfdw` binary: flag handling, exit codes, file
//! artifacts, and the record-as-config round trip.

use std::path::Path;
use std::process::{Command, Output};

fn tfdw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfdw"))
        .args(args)
        .output()
        .expect("failed to launch tfdw")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn parse_csv_column(csv: &str, column: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(',')
                .nth(column)
                .unwrap_or("")
                .parse::<f64>()
                .unwrap_or(f64::NAN)
        })
        .collect()
}

#[test]
fn dump_coeffs_tempered_geometric_values() {
    let out = tfdw(&[
        "dump-coeffs",
        "--kind",
        "tempered",
        "--beta",
        "1",
        "--lambda",
        "0",
        "--count",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("k,l_k\n"), "got header {text:?}");
    let values = parse_csv_column(&text, 1);
    for (k, &v) in values.iter().enumerate() {
        let expect = 1.0 - 3.0f64.powi(-(k as i32 + 1));
        assert!(
            (v - expect).abs() <= 1e-15,
            "l_{k} = {v}, expected {expect}"
        );
    }
}

#[test]
fn dump_coeffs_riesz_alpha_two_is_classical_stencil() {
    let out = tfdw(&[
        "dump-coeffs",
        "--kind",
        "riesz",
        "--alpha",
        "2",
        "--count",
        "6",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("m,w_m\n"));
    let values = parse_csv_column(&text, 1);
    assert_eq!(values, vec![1.0, -2.0, 1.0, 0.0, 0.0, 0.0]);
}

#[test]
fn dump_coeffs_grunwald_beta_one_all_ones() {
    let out = tfdw(&[
        "dump-coeffs",
        "--kind",
        "grunwald",
        "--beta",
        "1",
        "--count",
        "5",
    ]);
    assert!(out.status.success());
    let values = parse_csv_column(&stdout(&out), 1);
    assert_eq!(values, vec![1.0; 5]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["solve", "--alpha", "2.5"],
        vec!["solve", "--gamma", "0.9"],
        vec!["solve", "--lambda", "-1"],
        vec!["solve", "--m", "2"],
        vec!["solve", "--problem", "unknown"],
        vec!["converge", "--resolutions", "20"],
        vec!["converge", "--resolutions", "21,41"],
        vec!["converge", "--resolutions", "40,20"],
        vec!["dump-coeffs", "--kind", "unknown"],
        vec!["dump-coeffs", "--kind", "tempered", "--beta", "1.5"],
        vec!["solve", "--output-format", "xml"],
        vec!["not-a-subcommand"],
    ] {
        let out = tfdw(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {:?} stdout={} stderr={}",
            args,
            stdout(&out),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn error_messages_name_the_flag() {
    let out = tfdw(&["solve", "--alpha", "2.5"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--alpha"), "stderr was {err:?}");
}

#[test]
fn solve_writes_field_csv_and_json_record() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("field");
    let out = tfdw(&[
        "solve",
        "--m",
        "20",
        "--n",
        "10",
        "--output-path",
        stem.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert!(csv.starts_with("x,u\n"));
    let xs = parse_csv_column(&csv, 0);
    let us = parse_csv_column(&csv, 1);
    assert_eq!(xs.len(), 21);
    assert_eq!(us[0], 0.0);
    assert_eq!(us[20], 0.0);
    assert_eq!(xs[0], 0.0);
    assert!((xs[20] - 1.0).abs() < 1e-15);
    // interior values approximate the exact solution at T = 1/2
    let exact_mid = (-0.05f64).exp() / 128.0;
    assert!((us[10] - exact_mid).abs() < 1e-4);

    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(record["params"]["subcommand"], "solve");
    assert_eq!(record["params"]["m"], 20);
    assert!(record["rows"].as_array().unwrap().len() == 21);
    assert!(record["wall_ms"].is_u64());
    assert!(record["version"].is_string());
}

#[test]
fn converge_matches_reference_first_column() {
    let out = tfdw(&[
        "converge",
        "--resolutions",
        "20,40",
        "--alpha",
        "1.5",
        "--gamma",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("tau,h,max_error,rate\n"));
    let errors = parse_csv_column(&text, 2);
    assert!((errors[0] - 5.2886e-5).abs() / 5.2886e-5 <= 0.02);
    assert!((errors[1] - 1.4084e-5).abs() / 1.4084e-5 <= 0.02);
    // first row's rate column is empty
    let first_row = text.lines().nth(1).unwrap();
    assert!(first_row.ends_with(','));
}

#[test]
fn record_refed_as_config_reproduces_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let out = tfdw(&[
        "converge",
        "--resolutions",
        "20,40",
        "--gamma",
        "1.3",
        "--alpha",
        "1.7",
        "--output-path",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let second = dir.path().join("second");
    let out = tfdw(&[
        "converge",
        "--config",
        first.with_extension("json").to_str().unwrap(),
        "--output-path",
        second.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let a = std::fs::read(first.with_extension("csv")).unwrap();
    let b = std::fs::read(second.with_extension("csv")).unwrap();
    assert_eq!(a, b, "re-fed record must reproduce the CSV byte for byte");
}

#[test]
fn config_conflicts_with_parameter_flags() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("run");
    assert!(tfdw(&[
        "converge",
        "--resolutions",
        "20,40",
        "--output-path",
        stem.to_str().unwrap(),
    ])
    .status
    .success());
    let out = tfdw(&[
        "converge",
        "--config",
        stem.with_extension("json").to_str().unwrap(),
        "--alpha",
        "1.9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_is_runtime_failure() {
    let out = tfdw(&["converge", "--config", "/nonexistent/record.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--config"));
}

#[test]
fn config_subcommand_mismatch_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("run");
    assert!(tfdw(&[
        "converge",
        "--resolutions",
        "20,40",
        "--output-path",
        stem.to_str().unwrap()
    ])
    .status
    .success());
    let out = tfdw(&[
        "solve",
        "--config",
        stem.with_extension("json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_format_json_prints_record_to_stdout() {
    let out = tfdw(&["solve", "--m", "8", "--n", "4", "--output-format", "json"]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["params"]["n"], 4);
}

#[test]
fn output_path_extension_is_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let explicit = dir.path().join("table.csv");
    let out = tfdw(&[
        "converge",
        "--resolutions",
        "20,40",
        "--output-path",
        explicit.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(explicit.exists());
    assert!(dir.path().join("table.json").exists());
    assert!(!Path::new(&format!("{}.csv", explicit.display())).exists());
}

#[test]
fn output_path_with_dotted_stem_is_not_truncated() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("results-v1.2");
    let out = tfdw(&[
        "solve",
        "--m",
        "8",
        "--n",
        "4",
        "--output-path",
        stem.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("results-v1.2.csv").exists());
    assert!(dir.path().join("results-v1.2.json").exists());
    assert!(!dir.path().join("results-v1.csv").exists());
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = tfdw(&["verify", "--seed", "7"]);
    let text = stdout(&out);
    assert!(
        out.status.success(),
        "verify failed:\n{text}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(text.matches("PASS").count(), 6, "output:\n{text}");
    assert!(!text.contains("FAIL"));
}
