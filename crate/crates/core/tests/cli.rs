use std::path::Path;

use apointlab::cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["apointlab"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn evaluates_zeta_and_rejects_the_pole() {
    let (code, out, _) = invoke(&["zeta", "--s", "2,0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("1.644934066848"), "{out}");
    let (code, _, err) = invoke(&["zeta", "--s", "1,0"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("pole at s=1"));
}

#[test]
fn delta_on_the_critical_line_is_unimodular() {
    let (code, out, _) = invoke(&["delta", "--s", "0.5,30"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("modulus 1.000000e0"), "{out}");
}

#[test]
fn lambda_a_table() {
    let (code, out, _) = invoke(&["lambda-a", "--a", "2,0", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,re,im");
    assert_eq!(lines.len(), 5);
    let v: f64 = lines[4].split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 3.0 * 2f64.ln()).abs() < 1e-12);
}

#[test]
fn bad_arguments_are_usage_errors() {
    assert_eq!(invoke(&["zeta", "--s", "x"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["apoints", "--grid", "3,2"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["apoints", "--workers", "0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["verify", "thm1", "--a", "0,0"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn apoints_are_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["apoints", "--a", "0,1", "--t-max", "40", "--cache-dir", s(&cache)];
    let (code, first, _) = invoke(&args);
    assert_eq!(code, EXIT_OK);
    assert!(first.contains("count = "));
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 1);
    let csv = std::fs::read_to_string(&files[0]).unwrap();
    assert!(csv.starts_with("a_re,a_im,beta,gamma,residual\n"));
    let stamp = std::fs::metadata(&files[0]).unwrap().modified().unwrap();

    let (code, second, _) = invoke(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first, second);
    assert_eq!(std::fs::metadata(&files[0]).unwrap().modified().unwrap(), stamp);
}

#[test]
fn ingest_rejects_a_bad_table() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, "14.134725\n21.022040\n25.010858\n").unwrap();
    let (code, out, _) = invoke(&["ingest-zeros", "--zeros-file", s(&good), "--cache-dir", s(dir.path())]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("ordinates = 3"));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "14.134725\n20.0\n").unwrap();
    let (code, _, err) = invoke(&["ingest-zeros", "--zeros-file", s(&bad), "--cache-dir", s(dir.path())]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn contour_and_counts_pass() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = invoke(&["verify", "contour", "--a", "2,0", "--t-max", "30", "--out-dir", s(dir.path())]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, out, err) = invoke(&["verify", "counts", "--grid", "100,500", "--format", "csv", "--out-dir", s(dir.path())]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("T,lhs_re,lhs_im,main_re,main_im,residual_abs\n100,29,"), "{out}");
    assert!(dir.path().join("counts_report.json").exists());
    let (code, summary, _) = invoke(&["report", "--out-dir", s(dir.path())]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn thm2_from_a_zero_table_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeros_2050.txt");
    let (code, out, err) = invoke(&[
        "verify", "thm2", "--zeros-file", s(&table), "--grid", "250,500,1000", "--out-dir", s(dir.path()),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let json = std::fs::read_to_string(dir.path().join("thm2_report.json")).unwrap();
    assert_eq!(out.trim_end(), json.trim_end());
    let report = apointlab::verify::TheoremReport::from_json(&json).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert!(report.rows.iter().all(|r| r.residual_abs < 2.0));
}

#[test]
fn thm2_failure_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeros_2050.txt");
    let (code, _, err) = invoke(&[
        "verify", "thm2", "--zeros-file", s(&table), "--grid", "250,500,1000", "--tol", "1e-6", "--out-dir", s(dir.path()),
    ]);
    assert_eq!(code, EXIT_VERIFY);
    assert!(err.contains("residual/T"), "{err}");
}

#[test]
fn thm2_needs_a_table_that_reaches_t() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("short.txt");
    std::fs::write(&table, "14.134725\n21.022040\n25.010858\n").unwrap();
    let (code, _, err) = invoke(&["verify", "thm2", "--zeros-file", s(&table), "--grid", "250,500,1000"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("cover"), "{err}");
}
