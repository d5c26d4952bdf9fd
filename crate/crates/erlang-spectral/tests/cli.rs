use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use erlang_spectral::cli::{self, read_csv, EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE};
use erlang_spectral::{spectral_gap, ModelParams};

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("erlang-spectral-{}-{name}", std::process::id()))
}

fn run(args: &[&str]) -> i32 {
    cli::run(std::iter::once("erlang-spectral").chain(args.iter().copied()))
}

fn csv_rows(path: &PathBuf) -> (Vec<String>, Vec<Vec<String>>) {
    read_csv(BufReader::new(fs::File::open(path).unwrap())).unwrap()
}

fn column<'a>(head: &[String], row: &'a [String], name: &str) -> &'a str {
    let i = head.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    &row[i]
}

#[test]
fn gap_csv_round_trips_at_twelve_digits() {
    let out = tmp("gap.csv");
    let o = out.to_str().unwrap();
    assert_eq!(run(&["gap", "--beta", "2", "--eta", "0.1", "--format", "csv", "--out", o]), EXIT_OK);
    let (head, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    let r: f64 = column(&head, &rows[0], "r").parse().unwrap();
    let exact = spectral_gap(ModelParams::new(2.0, 0.1).unwrap()).unwrap().r;
    assert!((r - exact).abs() <= 5e-13 * exact, "{r} vs {exact}");
    assert!((r - 0.95576).abs() <= 5e-5);
    let tau: f64 = column(&head, &rows[0], "tau").parse().unwrap();
    assert!((tau * r - 1.0).abs() < 1e-11);
    fs::remove_file(out).ok();
}

#[test]
fn gap_at_eta_one_is_one() {
    let out = tmp("gap1.csv");
    assert_eq!(run(&["gap", "--beta", "0", "--eta", "1", "--format", "csv", "--out", out.to_str().unwrap()]), EXIT_OK);
    let (head, rows) = csv_rows(&out);
    let r: f64 = column(&head, &rows[0], "r").parse().unwrap();
    let tau: f64 = column(&head, &rows[0], "tau").parse().unwrap();
    assert!((r - 1.0).abs() < 1e-11 && (tau - 1.0).abs() < 1e-11);
    fs::remove_file(out).ok();
}

#[test]
fn gap_json_is_lossless() {
    let out = tmp("gap.json");
    assert_eq!(
        run(&["gap", "--gamma", "-1", "--eta", "0.01", "--format", "json", "--out", out.to_str().unwrap()]),
        EXIT_OK
    );
    let body = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 1);
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    let exact = spectral_gap(ModelParams::new(-0.1, 0.01).unwrap()).unwrap().r;
    assert_eq!(v["r"].as_f64().unwrap(), exact);
    assert_eq!(v["beta"].as_f64().unwrap(), -0.1);
    fs::remove_file(out).ok();
}

#[test]
fn extended_precision_gap_resolves_tiny_difference() {
    let out = tmp("gapx.csv");
    assert_eq!(
        run(&["gap", "--beta", "-1", "--eta", "0.05", "--precision", "extended", "--format", "csv", "--out", out.to_str().unwrap()]),
        EXIT_OK
    );
    let (head, rows) = csv_rows(&out);
    let d: f64 = column(&head, &rows[0], "r_minus_eta").parse().unwrap();
    assert!((d - 1.32910e-6).abs() <= 5e-11, "{d}");
    fs::remove_file(out).ok();
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(run(&["gap", "--beta", "1", "--eta", "0"]), EXIT_USAGE);
    assert_eq!(run(&["gap", "--beta", "1", "--eta", "-2"]), EXIT_USAGE);
    assert_eq!(run(&["gap", "--eta", "1"]), EXIT_USAGE);
    assert_eq!(run(&["nonsense"]), EXIT_USAGE);
    assert_eq!(run(&["table", "--id", "7"]), EXIT_USAGE);
    assert_eq!(run(&["surface", "--eta-range", "0:1", "--steps", "3"]), EXIT_USAGE);
    assert_eq!(run(&["density", "--beta", "1", "--eta", "0.5", "--x", "0", "--x0", "0"]), EXIT_USAGE);
}

#[test]
fn unwritable_output_exits_three() {
    let bad = std::env::temp_dir().join("erlang-spectral-no-such-dir").join("x").join("out.csv");
    assert_eq!(run(&["gap", "--beta", "1", "--eta", "0.5", "--out", bad.to_str().unwrap()]), EXIT_IO);
    let missing = tmp("missing.csv");
    assert_eq!(run(&["validate", "--input", missing.to_str().unwrap()]), EXIT_IO);
}

#[test]
fn surface_round_trips_through_validate() {
    let out = tmp("surface.csv");
    let o = out.to_str().unwrap();
    assert_eq!(
        run(&["surface", "--beta-range", "-2:3", "--eta-range", "0.5:3", "--steps", "5", "--format", "csv", "--out", o]),
        EXIT_OK
    );
    let (head, rows) = csv_rows(&out);
    assert_eq!(head, ["beta", "eta", "r", "row_monotone"]);
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r[3] == "true"));
    let grid = cli::surface_grid((-2.0, 3.0), (0.5, 3.0), 5).unwrap();
    for (row, (b, e, r, _)) in rows.iter().zip(&grid) {
        let parsed: Vec<f64> = row[..3].iter().map(|s| s.parse().unwrap()).collect();
        assert!((parsed[0] - b).abs() <= 1e-12 * b.abs().max(1.0));
        assert!((parsed[1] - e).abs() <= 1e-12 * e);
        assert!((parsed[2] - r).abs() <= 5e-12 * r);
    }
    let report = tmp("surface-check.json");
    assert_eq!(run(&["validate", "--input", o, "--format", "json", "--out", report.to_str().unwrap()]), EXIT_OK);
    fs::remove_file(out).ok();
    fs::remove_file(report).ok();
}

#[test]
fn eta_one_surface_row_is_flat() {
    let grid = cli::surface_grid((-2.0, 3.0), (0.5, 1.5), 3).unwrap();
    let flat: Vec<f64> = grid.iter().filter(|g| g.1 == 1.0).map(|g| g.2).collect();
    assert_eq!(flat.len(), 3);
    assert!(flat.iter().all(|r| (r - 1.0).abs() < 1e-9));
}

#[test]
fn broken_surface_file_fails_validation() {
    let path = tmp("broken.csv");
    fs::write(&path, "beta,eta,r,row_monotone\n0,0.5,0.6,false\n0,1,1.01,true\n").unwrap();
    assert_eq!(run(&["validate", "--input", path.to_str().unwrap(), "--format", "csv", "--out", tmp("broken-out.csv").to_str().unwrap()]), EXIT_FAILURE);
    fs::remove_file(path).ok();
    fs::remove_file(tmp("broken-out.csv")).ok();
}

#[test]
fn validate_report_schema() {
    let out = tmp("quick.json");
    let code = run(&["validate", "--suite", "quick", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let body = fs::read_to_string(&out).unwrap();
    assert!(body.lines().count() > 5);
    for line in body.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["check", "value", "expected", "tol", "pass"] {
            assert!(v.get(key).is_some(), "missing {key} in {line}");
        }
    }
    fs::remove_file(out).ok();
}

#[test]
fn table_four_csv() {
    let out = tmp("table4.csv");
    assert_eq!(run(&["table", "--id", "4", "--format", "csv", "--out", out.to_str().unwrap()]), EXIT_OK);
    let (head, rows) = csv_rows(&out);
    let at = |col: &str| {
        rows.iter()
            .find(|r| column(&head, r, "eta") == "0.01" && column(&head, r, "column") == col)
            .map(|r| column(&head, r, "computed").parse::<f64>().unwrap())
            .unwrap()
    };
    assert!((at("r") - 0.31673).abs() <= 5e-5);
    assert!((at("estimate") - 0.31836).abs() <= 5e-5);
    assert!(rows.iter().all(|r| column(&head, r, "pass") == "true"));
    fs::remove_file(out).ok();
}

#[test]
fn eigs_and_discrete_commands() {
    let out = tmp("eigs.csv");
    assert_eq!(run(&["eigs", "--beta", "0", "--eta", "1", "--n", "4", "--format", "csv", "--out", out.to_str().unwrap()]), EXIT_OK);
    let (head, rows) = csv_rows(&out);
    for (k, row) in rows.iter().enumerate() {
        let l: f64 = column(&head, row, "lambda").parse().unwrap();
        assert!((l - (k + 1) as f64).abs() < 1e-9);
    }
    let d = tmp("discrete.csv");
    assert_eq!(run(&["discrete", "--m", "10", "--rho", "0.9", "--eta", "0.5", "--format", "csv", "--out", d.to_str().unwrap()]), EXIT_OK);
    let (head, rows) = csv_rows(&d);
    let a: f64 = column(&head, &rows[0], "discrete_gap").parse().unwrap();
    let b: f64 = column(&head, &rows[0], "generator_gap").parse().unwrap();
    assert!((a - b).abs() < 1e-6);
    fs::remove_file(out).ok();
    fs::remove_file(d).ok();
}

#[test]
fn full_suite_csv_is_rectangular() {
    let out = tmp("full.csv");
    assert_eq!(run(&["validate", "--suite", "full", "--format", "csv", "--out", out.to_str().unwrap()]), EXIT_OK);
    let (head, rows) = csv_rows(&out);
    assert_eq!(head, ["check", "value", "expected", "tol", "pass", "known_deviation"]);
    let failed: Vec<&Vec<String>> = rows.iter().filter(|r| r[4] == "false").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|r| !r[5].is_empty() && !r[5].starts_with("error:")));
    fs::remove_file(out).ok();
}
