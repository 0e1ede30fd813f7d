//! End-to-end tests that drive the compiled `kripp` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use krippendorff::{
    alpha_point, dfbeta, quantile, resample_alpha, BootstrapConfig, DistanceSpec,
    ReliabilityMatrix,
};

const BIN: &str = env!("CARGO_BIN_EXE_kripp");

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn kripp(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn survey_matrix() -> ReliabilityMatrix {
    let na = None;
    let rows: Vec<Vec<Option<f64>>> = vec![
        vec![Some(1.0), Some(1.0), na, Some(1.0)],
        vec![Some(2.0), Some(2.0), Some(3.0), Some(2.0)],
        vec![Some(3.0), Some(3.0), Some(3.0), Some(3.0)],
        vec![Some(3.0), Some(3.0), Some(3.0), Some(3.0)],
        vec![Some(2.0), Some(2.0), Some(2.0), Some(2.0)],
        vec![Some(1.0), Some(2.0), Some(3.0), Some(4.0)],
        vec![Some(4.0), Some(4.0), Some(4.0), Some(4.0)],
        vec![Some(1.0), Some(1.0), Some(2.0), Some(1.0)],
        vec![Some(2.0), Some(2.0), Some(2.0), Some(2.0)],
        vec![na, Some(5.0), Some(5.0), Some(5.0)],
        vec![na, na, Some(1.0), Some(1.0)],
        vec![na, Some(3.0), na, na],
    ];
    ReliabilityMatrix::from_rows(&rows).unwrap()
}

#[test]
fn alpha_text_report_shows_estimate_and_interval() {
    let path = fixture("nominal.csv");
    let out = kripp(&[
        "alpha", &path, "--level", "nominal", "--seed", "42", "--bootit", "500",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("Krippendorff's Alpha"));
    assert!(text.contains("alpha   0.7429"));
    assert!(text.contains("12 units, 4 coders (11 retained, 1 dropped)"));
    assert!(text.contains("Distance: nominal"));
    assert!(text.contains("seed 42"));
    assert!(text.contains("Substantial Agreement"));
}

#[test]
fn alpha_json_matches_library_at_full_precision() {
    let path = fixture("nominal.csv");
    let out = kripp(&[
        "alpha", &path, "--level", "nominal", "--seed", "42", "--bootit", "500", "--out", "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();

    let matrix = survey_matrix();
    let estimate = alpha_point(&matrix, &DistanceSpec::Nominal).unwrap();
    let config = BootstrapConfig::with_seed(42);
    let config = BootstrapConfig { bootit: 500, ..config };
    let boot = resample_alpha(&matrix, &DistanceSpec::Nominal, &config).unwrap();

    assert_eq!(json["alpha"].as_f64().unwrap(), estimate.alpha);
    assert_eq!(json["d_observed"].as_f64().unwrap(), estimate.d_observed);
    assert_eq!(json["d_expected"].as_f64().unwrap(), estimate.d_expected);
    assert_eq!(json["ci_lower"].as_f64().unwrap(), boot.ci_lower);
    assert_eq!(json["ci_upper"].as_f64().unwrap(), boot.ci_upper);
    assert_eq!(json["seed"].as_u64().unwrap(), 42);
    assert_eq!(json["bootit"].as_u64().unwrap(), 500);
    assert_eq!(json["retained_units"].as_u64().unwrap(), 11);
    assert_eq!(json["dropped_units"].as_u64().unwrap(), 1);
}

#[test]
fn usage_errors_exit_2() {
    let path = fixture("nominal.csv");
    let bad_dsl = kripp(&["alpha", &path, "--distance", "x +", "--no-confint"]);
    assert_eq!(bad_dsl.status.code(), Some(2));
    assert!(stderr_of(&bad_dsl).contains("parse error at offset 3"));

    let stray_flag = kripp(&["alpha", &path, "--intervals", "4", "--no-confint"]);
    assert_eq!(stray_flag.status.code(), Some(2));

    let missing_bounds = kripp(&["alpha", &path, "--level", "bipolar", "--no-confint"]);
    assert_eq!(missing_bounds.status.code(), Some(2));

    let conflict = kripp(&["alpha", &path, "--no-confint", "--boot-sample", "/tmp/x.csv"]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn data_errors_exit_3() {
    let absent = kripp(&["alpha", "no-such-file.csv", "--no-confint"]);
    assert_eq!(absent.status.code(), Some(3));
    assert!(stderr_of(&absent).contains("no-such-file.csv"));

    let dir = tempfile::tempdir().unwrap();
    let narrow = dir.path().join("narrow.csv");
    std::fs::write(&narrow, "1\n2\n3\n").unwrap();
    let out = kripp(&["alpha", narrow.to_str().unwrap(), "--no-confint"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn degenerate_data_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    std::fs::write(&flat, "1,1\n1,1\n").unwrap();
    let out = kripp(&["alpha", flat.to_str().unwrap(), "--no-confint"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("alpha is undefined"));
}

#[test]
fn unwritable_artifact_path_exits_1() {
    let path = fixture("nominal.csv");
    let out = kripp(&[
        "alpha", &path, "--level", "nominal", "--seed", "1", "--bootit", "50",
        "--boot-sample", "/no-such-dir/replicates.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn boot_sample_file_reproduces_the_interval() {
    let dir = tempfile::tempdir().unwrap();
    let sample = dir.path().join("replicates.csv");
    let path = fixture("nominal.csv");
    let out = kripp(&[
        "alpha", &path, "--level", "nominal", "--seed", "9", "--bootit", "400",
        "--boot-sample", sample.to_str().unwrap(), "--out", "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();

    let text = std::fs::read_to_string(&sample).unwrap();
    let replicates: Vec<f64> = text.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(replicates.len(), 400);

    // Shortest-round-trip formatting means the file carries full precision:
    // recomputing the interval from the file reproduces the reported one.
    let tail = (1.0 - json["conf_level"].as_f64().unwrap()) / 2.0;
    let lo = quantile(&replicates, tail).unwrap();
    let hi = quantile(&replicates, 1.0 - tail).unwrap();
    assert_eq!(json["ci_lower"].as_f64().unwrap(), lo);
    assert_eq!(json["ci_upper"].as_f64().unwrap(), hi);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("nominal.csv");
    let mut artifacts = Vec::new();
    for run in 0..2 {
        let sample = dir.path().join(format!("s{run}.csv"));
        let hist = dir.path().join(format!("h{run}.svg"));
        let out = kripp(&[
            "alpha", &path, "--level", "nominal", "--seed", "1234", "--bootit", "300",
            "--boot-sample", sample.to_str().unwrap(), "--hist", hist.to_str().unwrap(),
            "--out", "json",
        ]);
        assert!(out.status.success());
        artifacts.push((
            out.stdout,
            std::fs::read(&sample).unwrap(),
            std::fs::read(&hist).unwrap(),
        ));
    }
    assert_eq!(artifacts[0], artifacts[1]);
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("nominal.csv");
    let mut runs = Vec::new();
    for workers in ["1", "4"] {
        let sample = dir.path().join(format!("w{workers}.csv"));
        let out = kripp(&[
            "alpha", &path, "--level", "nominal", "--seed", "77", "--bootit", "600",
            "--workers", workers, "--boot-sample", sample.to_str().unwrap(), "--out", "json",
        ]);
        assert!(out.status.success());
        let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
        runs.push((json, std::fs::read(&sample).unwrap()));
    }
    let (ref j1, ref s1) = runs[0];
    let (ref j4, ref s4) = runs[1];
    assert_eq!(s1, s4, "replicate files differ across worker counts");
    // The reports agree on every field except the echoed worker count.
    let mut j1 = j1.clone();
    let mut j4 = j4.clone();
    j1["workers"] = serde_json::Value::Null;
    j4["workers"] = serde_json::Value::Null;
    assert_eq!(j1, j4);
}

#[test]
fn stdin_dash_reads_standard_input() {
    let path = fixture("nominal.csv");
    let bytes = std::fs::read(&path).unwrap();
    let mut child = Command::new(BIN)
        .args(["alpha", "-", "--level", "nominal", "--no-confint", "--out", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(&bytes).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let piped: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();

    let from_file = kripp(&["alpha", &path, "--level", "nominal", "--no-confint", "--out", "json"]);
    let direct: serde_json::Value = serde_json::from_str(&stdout_of(&from_file)).unwrap();
    assert_eq!(piped, direct);
}

#[test]
fn custom_expression_reproduces_interval_alpha() {
    let path = fixture("nominal.csv");
    let custom = kripp(&["alpha", &path, "--distance", "(x-y)^2", "--no-confint", "--out", "json"]);
    let interval = kripp(&["alpha", &path, "--level", "interval", "--no-confint", "--out", "json"]);
    let a: serde_json::Value = serde_json::from_str(&stdout_of(&custom)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout_of(&interval)).unwrap();
    assert_eq!(a["alpha"], b["alpha"]);
    assert_eq!(a["d_observed"], b["d_observed"]);
    assert_eq!(a["d_expected"], b["d_expected"]);
    assert_eq!(a["distance"].as_str().unwrap(), "custom((x-y)^2)");
}

#[test]
fn suspicious_custom_expression_warns_on_stderr() {
    let path = fixture("nominal.csv");
    let out = kripp(&["alpha", &path, "--distance", "max(x-y, 0)", "--no-confint"]);
    assert!(out.status.success(), "warnings must not abort the run");
    assert!(stderr_of(&out).contains("asymmetric"));

    // An antisymmetric expression cancels the pooled disagreement entirely,
    // which surfaces as the degenerate-data exit, not a crash.
    let cancel = kripp(&["alpha", &path, "--distance", "x - y", "--no-confint"]);
    assert_eq!(cancel.status.code(), Some(4));
}

#[test]
fn constant_rows_give_unit_interval_at_one() {
    let path = fixture("constant.csv");
    let out = kripp(&["alpha", &path, "--seed", "5", "--bootit", "200", "--out", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["alpha"].as_f64().unwrap(), 1.0);
    assert_eq!(json["ci_lower"].as_f64().unwrap(), 1.0);
    assert_eq!(json["ci_upper"].as_f64().unwrap(), 1.0);
}

#[test]
fn influence_output_is_one_based_and_matches_library() {
    let path = fixture("nominal.csv");
    let out = kripp(&[
        "influence", &path, "--level", "nominal", "--units", "6,12", "--coders", "3",
        "--out", "json",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();

    let matrix = survey_matrix();
    let report = dfbeta(&matrix, &DistanceSpec::Nominal, &[5, 11], &[2]).unwrap();
    assert_eq!(
        json["units"]["6"].as_f64().unwrap(),
        report.unit_dfbetas[&5]
    );
    assert_eq!(
        json["units"]["12"].as_f64().unwrap(),
        report.unit_dfbetas[&11]
    );
    assert_eq!(
        json["coders"]["3"].as_f64().unwrap(),
        report.coder_dfbetas[&2]
    );

    let text = kripp(&["influence", &path, "--level", "nominal", "--units", "6"]);
    assert!(stdout_of(&text).contains("unit 6: -0.1141961"));
}

#[test]
fn influence_rejects_bad_indices() {
    let path = fixture("nominal.csv");
    let zero = kripp(&["influence", &path, "--level", "nominal", "--units", "0"]);
    assert_eq!(zero.status.code(), Some(2));
    let high = kripp(&["influence", &path, "--level", "nominal", "--units", "13"]);
    assert_eq!(high.status.code(), Some(2));
    let none = kripp(&["influence", &path, "--level", "nominal"]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn simulate_reports_coverage_and_per_rep_rows() {
    let dir = tempfile::tempdir().unwrap();
    let per_rep = dir.path().join("reps.csv");
    let out = kripp(&[
        "simulate", "--units", "15", "--coders", "3", "--reps", "10", "--bootit", "100",
        "--seed", "11", "--per-rep", per_rep.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["reps"].as_u64().unwrap(), 10);
    assert_eq!(json["true_alpha"].as_f64().unwrap(), 0.5);
    let coverage = json["coverage"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&coverage));

    let text = std::fs::read_to_string(&per_rep).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rep,alpha_hat,ci_lower,ci_upper,hit");
    assert_eq!(lines.len(), 11);
    let mut hits = 0u64;
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<usize>().unwrap(), i + 1);
        let lo: f64 = fields[2].parse().unwrap();
        let hi: f64 = fields[3].parse().unwrap();
        assert!(lo <= hi);
        hits += fields[4].parse::<u64>().unwrap();
    }
    assert_eq!(hits, json["hits"].as_u64().unwrap());
}

#[test]
fn simulate_rejects_bad_parameters() {
    let out = kripp(&["simulate", "--sigma-eps", "0", "--reps", "2", "--bootit", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kripp(&["simulate", "--missing-rate", "1.5", "--reps", "2", "--bootit", "50"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn header_delimiter_and_na_tokens_are_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scores.csv");
    std::fs::write(&path, "c1;c2;c3\n1;2;miss\n2;2;2\n3;1;3\n1;1;1\n").unwrap();
    let out = kripp(&[
        "alpha", path.to_str().unwrap(), "--header", "--delimiter", ";",
        "--na-token", "miss", "--level", "nominal", "--no-confint", "--out", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["n_units"].as_u64().unwrap(), 4);
    assert_eq!(json["n_coders"].as_u64().unwrap(), 3);
    assert_eq!(json["retained_units"].as_u64().unwrap(), 4);
}

#[test]
fn verbose_progress_goes_to_stderr_only() {
    let path = fixture("nominal.csv");
    let quiet = kripp(&[
        "alpha", &path, "--level", "nominal", "--seed", "8", "--bootit", "120", "--out", "json",
    ]);
    let loud = kripp(&[
        "alpha", &path, "--level", "nominal", "--seed", "8", "--bootit", "120", "--out", "json",
        "--verbose",
    ]);
    assert_eq!(quiet.stdout, loud.stdout, "progress must not leak into stdout");
    let bar = stderr_of(&loud);
    assert!(bar.contains('|') && bar.contains("100%"));
}
