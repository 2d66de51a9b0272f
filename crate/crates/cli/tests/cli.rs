use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn subrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subrank"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(dir: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn verify_k4_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = subrank(&["verify", "--k-max", "4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(dir.path());
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);
    assert_eq!(r["config"]["command"], "verify");
    assert_eq!(r["summary"]["scan"]["k_certified"], 1);
    assert!(r["rows"][0]["code_version"].is_string());
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("k,r,method,s,decision,verified"));
}

#[test]
fn verify_reports_are_reproducible_across_jobs_and_cache() {
    let base = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = base.path().join(name);
        let mut args = vec!["verify", "--k-max", "30", "--no-timing", "--out", out.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = subrank(&args);
        assert_eq!(o.status.code(), Some(0));
        (
            fs::read(out.join("report.json")).unwrap(),
            fs::read(out.join("report.csv")).unwrap(),
        )
    };
    let cache = base.path().join("cache.jsonl");
    let cache = cache.to_str().unwrap();
    let cold = run("a", &[]);
    assert_eq!(cold, run("a2", &[]));
    let parallel = run("b", &["--jobs", "3"]);
    let first = run("c", &["--cache", cache]);
    let resumed = run("d", &["--cache", cache]);
    let strip = |bytes: &[u8]| {
        let mut v: Value = serde_json::from_slice(bytes).unwrap();
        v["config"]["cache"] = Value::Null;
        v["config"]["jobs"] = Value::Null;
        v["summary"]["scan"]["cached_cells"] = Value::Null;
        v
    };
    for other in [&parallel, &first, &resumed] {
        assert_eq!(other.1, cold.1);
        assert_eq!(strip(&other.0), strip(&cold.0));
    }
    let r: Value = serde_json::from_slice(&resumed.0).unwrap();
    assert!(r["summary"]["scan"]["cached_cells"].as_u64().unwrap() > 0);
}

#[test]
fn verify_rejects_bad_range() {
    assert_eq!(subrank(&["verify", "--k-max", "5"]).status.code(), Some(64));
    assert_eq!(
        subrank(&["verify", "--k-max", "8", "--jobs", "0"]).status.code(),
        Some(64)
    );
    assert_eq!(subrank(&["verify"]).status.code(), Some(64));
}

#[test]
fn verify_reports_unwritable_output() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let bad = file.path().join("sub");
    let o = subrank(&["verify", "--k-max", "4", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn subrank_examples() {
    let o = subrank(&["subrank", "--edges", data("diagonal3.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Q = 3\n"));
    let o = subrank(&["subrank", "--edges", data("diagonal3_plus.txt").to_str().unwrap()]);
    assert!(stdout(&o).starts_with("Q = 2\n"));
    let o = subrank(&[
        "subrank",
        "--edges",
        data("phi_11.txt").to_str().unwrap(),
        "--power",
        "2",
    ]);
    assert!(stdout(&o).starts_with("Q = 4\n"));
}

#[test]
fn subrank_flags_budget_exhaustion_and_parse_errors() {
    let o = subrank(&[
        "subrank",
        "--edges",
        data("phi_11.txt").to_str().unwrap(),
        "--power",
        "3",
        "--budget",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("exact: false"));
    let bad = tempfile::NamedTempFile::new().unwrap();
    fs::write(bad.path(), "3 2 2 2\n1 1\n").unwrap();
    let o = subrank(&["subrank", "--edges", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn suites_exit_zero_and_reproduce() {
    assert_eq!(
        subrank(&["suites", "--suite", "kraw", "--n-max", "31"]).status.code(),
        Some(0)
    );
    assert_eq!(
        subrank(&["suites", "--suite", "props", "--k-max", "60"]).status.code(),
        Some(0)
    );
    let base = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str| {
        let out = base.path().join(name);
        let o = subrank(&[
            "suites",
            "--suite",
            "fourier",
            "--n-max",
            "11",
            "--samples",
            "20",
            "--seed",
            "9",
            "--jobs",
            jobs,
            "--no-timing",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        fs::read(out.join("report.csv")).unwrap()
    };
    let a = run("a", "1");
    assert_eq!(a, run("b", "2"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 1 + 5 * 20);
    assert!(text.lines().skip(1).all(|l| l.contains(",9,")));
}

#[test]
fn suites_reject_unknown_name() {
    assert_eq!(subrank(&["suites", "--suite", "nope"]).status.code(), Some(64));
}

#[test]
fn cw3_examples() {
    let o = subrank(&["cw3", "--edges", data("phi_21.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let bits: f64 = text
        .strip_prefix("lower bound: ")
        .and_then(|t| t.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((bits - 0.9183).abs() < 1e-3);
    assert!(text.contains("conjectured value"));
    let o = subrank(&[
        "cw3",
        "--edges",
        data("phi_21.txt").to_str().unwrap(),
        "--alpha",
        data("alpha_21.txt").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = subrank(&[
        "cw3",
        "--edges",
        data("diagonal2.txt").to_str().unwrap(),
        "--alpha",
        data("alpha_diagonal2.txt").to_str().unwrap(),
    ]);
    assert!(stdout(&o).starts_with("lower bound: 1.000000"));
}

#[test]
fn cw3_rejects_bad_inputs() {
    let o = subrank(&["cw3", "--edges", data("phi_11.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("order mismatch"));
    let o = subrank(&["cw3", "--edges", data("diagonal2.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    let o = subrank(&[
        "cw3",
        "--edges",
        data("phi_21.txt").to_str().unwrap(),
        "--alpha",
        data("alpha_diagonal2.txt").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not tight"));
}
