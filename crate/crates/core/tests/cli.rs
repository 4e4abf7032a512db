use std::path::Path;
use std::process::{Command, Output};

use unipol::io::{read_sequence_file, RunRecord};
use unipol::metrics::isl_time;

fn unipol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unipol"))
        .args(args)
        .env("UNIPOL_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = unipol(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
        .to_string()
}

#[test]
fn design_writes_record_and_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let rec_path = dir.path().join("run.json");
    ok(&["design", "-N", "100", "--iters", "50", "--seed", "3", "-o", path(&rec_path)]);

    let rec = RunRecord::from_json(&std::fs::read_to_string(&rec_path).unwrap()).unwrap();
    assert_eq!(rec.n, 100);
    assert_eq!(rec.algorithm, "unipol");
    assert_eq!(rec.isl_trace.len(), 51);
    assert!(rec.final_isl < rec.isl_trace[0]);

    let seq = read_sequence_file(&dir.path().join("run.seq.csv")).unwrap();
    let isl = isl_time(&seq);
    assert!((isl - rec.final_isl).abs() <= 1e-9 * rec.final_isl);
}

#[test]
fn design_is_reproducible_and_accepts_start_file() {
    let a = ok(&["design", "-N", "16", "--iters", "10", "--seed", "9"]);
    let b = ok(&["design", "-N", "16", "--iters", "10", "--seed", "9"]);
    let ra = RunRecord::from_json(&a).unwrap();
    let rb = RunRecord::from_json(&b).unwrap();
    assert_eq!(ra.isl_trace, rb.isl_trace);
    assert_eq!(ra.final_phases, rb.final_phases);

    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("start.csv");
    ok(&["generate", "--family", "golomb", "-N", "16", "-o", path(&start)]);
    let rec = RunRecord::from_json(&ok(&[
        "design", "-N", "16", "--iters", "5", "--algo", "can", "--init", path(&start),
    ]))
    .unwrap();
    assert_eq!(rec.algorithm, "can");
    let golomb = isl_time(&read_sequence_file(&start).unwrap());
    assert!((rec.isl_trace[0] - golomb).abs() <= 1e-9 * golomb);
}

#[test]
fn single_element_design_has_zero_isl() {
    let rec = RunRecord::from_json(&ok(&["design", "-N", "1", "--iters", "5"])).unwrap();
    assert!(rec.isl_trace.iter().all(|&v| v == 0.0));
    assert_eq!(rec.merit_factor, None);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["design", "-N", "0"][..],
        &["design", "-N", "10", "--tol", "-1"],
        &["generate", "--family", "barker", "-N", "6"],
        &["generate", "--family", "frank", "-N", "15"],
        &["generate", "--family", "nope", "-N", "4"],
        &["bench", "--lengths", "1,10"],
    ] {
        let out = unipol(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unreadable_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(unipol(&["metrics", path(&missing)]).status.code(), Some(1));

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "index,phase,re,im\n0,zero,1,0\n").unwrap();
    let out = unipol(&["metrics", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn barker_metrics_report() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("b13.csv");
    ok(&["generate", "--family", "barker", "-N", "13", "-o", path(&seq)]);
    let report = ok(&["metrics", path(&seq)]);
    assert_eq!(report_value(&report, "N"), "13");
    let isl: f64 = report_value(&report, "isl").parse().unwrap();
    let psl: f64 = report_value(&report, "psl").parse().unwrap();
    let mf: f64 = report_value(&report, "merit_factor").parse().unwrap();
    assert!((isl - 6.0).abs() <= 1e-12);
    assert!((psl - 1.0).abs() <= 1e-12);
    assert!((mf - 169.0 / 12.0).abs() <= 1e-12);
    // Header plus lags 0..12.
    let table = report.split("lag,db\n").nth(1).unwrap();
    assert_eq!(table.lines().count(), 13);
    assert!(table.starts_with("0,0.000000"));

    let json: serde_json::Value = serde_json::from_str(&ok(&["metrics", path(&seq), "--json"])).unwrap();
    assert_eq!(json["N"], 13);
    assert_eq!(json["sidelobesDb"].as_array().unwrap().len(), 13);
}

#[test]
fn generated_families_have_good_merit() {
    for (family, n) in [("frank", "16"), ("golomb", "100"), ("chu", "100"), ("p4", "100")] {
        let table = ok(&["generate", "--family", family, "-N", n]);
        assert!(table.starts_with("index,phase,re,im\n"));
        let dir = tempfile::tempdir().unwrap();
        let seq = dir.path().join("s.csv");
        std::fs::write(&seq, &table).unwrap();
        let report = ok(&["metrics", path(&seq)]);
        let mf: f64 = report_value(&report, "merit_factor").parse().unwrap();
        assert!(mf > 3.0, "{family}: {mf}");
    }
}

#[test]
fn bench_csv_is_deterministic() {
    let args = ["bench", "--lengths", "50,100", "--runs", "3", "--iters", "20"];
    let a = ok(&args);
    let b = ok(&args);
    let rows: Vec<Vec<String>> = a
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows[0].join(","), "algo,N,seed,iterations,finalIsl,totalSeconds,perIterSeconds");
    assert_eq!(rows.len(), 1 + 2 * 2 * 3);
    let strip = |s: &str| -> Vec<String> {
        s.lines().map(|l| l.split(',').take(5).collect::<Vec<_>>().join(",")).collect()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(rows[1][..3], ["unipol", "50", "0"]);
    assert_eq!(rows[12][..3], ["can", "100", "2"]);
}
