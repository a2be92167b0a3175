use std::path::Path;
use std::process::{Command, Output};

fn hsprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsprob"))
        .args(args)
        .env_remove("HSPROB_SEED")
        .env_remove("HSPROB_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn estimate_writes_a_self_describing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = hsprob(&[
        "estimate", "--dims", "2x2", "--field", "complex", "--trials", "2e4", "--seed", "42", "--batch-size", "5e3",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["trials"], 20_000);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["batch_size"], 5_000);
    assert_eq!(v["shape"]["rank"], 4);
    assert_eq!(v["shape"]["field"], "complex");
    assert_eq!(v["tolerances"]["ppt"], 1e-10);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    let p = v["p_hat"].as_f64().unwrap();
    assert!((p - 8.0 / 33.0).abs() < 0.015, "p_hat {p}");
}

#[test]
fn identical_command_lines_give_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, workers: &str| {
        let out = dir.path().join(name);
        let o = hsprob(&[
            "estimate", "--dims", "2x3", "--rank", "4", "--field", "real", "--trials", "1e4", "--batch-size", "1000",
            "--workers", workers, "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("a.json", "1"), run("b.json", "3"));
}

#[test]
fn environment_sets_seed_but_flags_win() {
    let run = |env_seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hsprob"));
        c.args(["estimate", "--trials", "100"]).env_remove("HSPROB_SEED");
        if let Some(s) = env_seed {
            c.env("HSPROB_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        let o = c.output().unwrap();
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()["seed"].clone()
    };
    assert_eq!(run(Some("77"), None), 77);
    assert_eq!(run(Some("77"), Some("5")), 5);
    assert_eq!(run(None, None), 1);
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["estimate", "--trials", "0"][..],
        &["estimate", "--dims", "2x3", "--rank", "7"],
        &["estimate", "--dims", "2by3"],
        &["estimate", "--field", "quaternion"],
        &["estimate", "--trials", "1.5"],
        &["verify", "--suite", "nonsense"],
        &["verify", "--suite", "zero-rank", "--dims", "2x3", "--rank", "4", "--trials", "10"],
        &["conjecture", "--phat", "0.5"],
        &["conjecture", "--phat", "0.5", "--interval", "0.01", "--primes", "2,9"],
        &["estimate", "--trials", "10", "--out", "/nonexistent/dir/report.json"],
    ] {
        let o = hsprob(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn conjecture_echoes_the_factored_top_candidate() {
    let o = hsprob(&[
        "conjecture", "--phat", "0.000707020", "--interval", "5e-6", "--primes", "2,3,5,7,11", "--max-den", "1e4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "7/9900 = 7 / 2^2·3^2·5^2·11");

    let o = hsprob(&["conjecture", "--phat", "0.00774006", "--interval", "2e-5", "--primes", "2,3,5", "--max-den", "1e5", "--ranking", "distance"]);
    assert_eq!(stdout(&o).trim(), "387/50000 = 3^2·43 / 2^4·5^5");
}

#[test]
fn conjecture_json_and_degenerate_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = hsprob(&["conjecture", "--phat", "0.3", "--interval", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["num"], 3);
    assert_eq!(v[0]["den"], 10);
    assert_eq!(v[0]["den_factors"]["5"], 1);
    assert_eq!(v[0]["distance"], 0.0);

    let o = hsprob(&["conjecture", "--phat", "0.30001", "--lo", "0.3", "--hi", "0.3002", "--primes", "2", "--max-den", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(json(&out), serde_json::json!([]));
}

#[test]
fn conjecture_reads_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = hsprob(&["estimate", "--dims", "2x2", "--field", "real", "--trials", "2e4", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = hsprob(&["conjecture", "--report", report.to_str().unwrap(), "--max-den", "200", "--primes", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("/"));
}

#[test]
fn verify_reports_pass_and_fail_through_exit_codes() {
    let o = hsprob(&["verify", "--suite", "zero-rank", "--trials", "2e3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 2, "{text}");

    let o = hsprob(&["verify", "--suite", "det-split", "--trials", "2e4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // A tolerance of a millionth of a standard error cannot be met.
    let o = hsprob(&["verify", "--suite", "half-theorem", "--trials", "5e3", "--n-sigma", "1e-6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn verify_known_values_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("checks.json");
    let o = hsprob(&["verify", "--suite", "known-values", "--name", "two-rebit", "--trials", "2e4", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["target"], 29.0 / 64.0);
}

#[test]
fn interrupted_run_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let full = dir.path().join("full.json");
    let resumed = dir.path().join("resumed.json");
    let base = ["estimate", "--dims", "2x3", "--rank", "4", "--field", "real", "--trials", "6000", "--batch-size", "1000", "--seed", "3"];

    let o = hsprob(&[&base[..], &["--out", full.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0));
    let o = hsprob(&[&base[..], &["--checkpoint", ckpt.to_str().unwrap(), "--stop-after", "2"]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&ckpt)["next_batch_id"], 2);

    let o = hsprob(&[&base[..], &["--resume", ckpt.to_str().unwrap(), "--out", resumed.to_str().unwrap()]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&full).unwrap(), std::fs::read(&resumed).unwrap());
    assert_eq!(json(&ckpt)["next_batch_id"], 6);

    let o = hsprob(&["estimate", "--dims", "2x3", "--rank", "4", "--field", "real", "--trials", "6000", "--batch-size", "1000", "--seed", "4", "--resume", ckpt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trace_csv_from_run_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = hsprob(&["trace", "--trials", "5000", "--batch-size", "1000", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trials,successes,p_hat,wilson_lo,wilson_hi");
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("5000,"));

    let ckpt = dir.path().join("c.json");
    hsprob(&["estimate", "--trials", "5000", "--batch-size", "1000", "--checkpoint", ckpt.to_str().unwrap(), "--stop-after", "3"]);
    let o = hsprob(&["trace", "--from-checkpoint", ckpt.to_str().unwrap(), "--stride", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let marks: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(marks, vec!["2000", "3000"]);
    // Same prefix as the uninterrupted run.
    assert_eq!(text.lines().last().unwrap(), lines[3]);
}

#[test]
fn estimate_also_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = hsprob(&["estimate", "--trials", "3000", "--batch-size", "1000", "--trace", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    let last: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(last[1], report["successes"].to_string());
}
