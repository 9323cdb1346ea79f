//! Black-box tests of the `sugeno` binary: exit codes, JSON envelope shape,
//! CSV formats, determinism.

use std::process::{Command, Output};

fn sugeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sugeno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn envelope_has_the_documented_fields() {
    let out = sugeno(&["integrate", "sugeno", "--f", "x/2", "--domain", "0", "5"]);
    assert!(out.status.success());
    let v = json_of(&out);
    for key in ["version", "command", "config", "result", "notes"] {
        assert!(v.get(key).is_some(), "missing {key}: {v}");
    }
    assert_eq!(v["command"], "integrate sugeno");
    // Config echoes every effective value.
    for key in [
        "f",
        "domain",
        "measure",
        "tol",
        "quad_tol",
        "root_tol",
        "scan_points",
    ] {
        assert!(
            v["config"].get(key).is_some(),
            "config missing {key}: {}",
            v["config"]
        );
    }
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 5.0 / 3.0).abs() < 1e-6, "{value}");
}

#[test]
fn constant_integral_hits_the_domain_length() {
    let out = sugeno(&["integrate", "sugeno", "--f", "7", "--domain", "0", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["result"]["value"].as_f64().unwrap(), 3.0);
}

#[test]
fn published_example_note_rides_along() {
    let out = sugeno(&[
        "integrate",
        "sugeno",
        "--f",
        "x/(2*exp(1))",
        "--domain",
        "0",
        "5",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    let notes = v["notes"].as_array().unwrap();
    let joined: String = notes
        .iter()
        .filter_map(|n| n.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    assert!(joined.contains("0.781"), "{joined}");
    let value = v["result"]["value"].as_f64().unwrap();
    assert!(
        (value - 5.0 / (1.0 + 2.0 * std::f64::consts::E)).abs() < 1e-6,
        "{value}"
    );
}

#[test]
fn riemann_integration_works() {
    let out = sugeno(&["integrate", "riemann", "--f", "x^2", "--domain", "0", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!((v["result"]["value"].as_f64().unwrap() - 9.0).abs() < 1e-9);
    assert!(v["result"]["evaluations"].as_u64().unwrap() > 0);
}

#[test]
fn check_pk1_holds_with_exit_zero() {
    let out = sugeno(&["check", "pk1", "--f", "x/2", "--domain", "0", "5"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    assert_eq!(v["result"]["holds"], true);
    assert!((v["result"]["lhs"].as_f64().unwrap() - 0.776812).abs() < 1e-5);
    assert!((v["result"]["rhs"].as_f64().unwrap() - 1.666667).abs() < 1e-5);
    assert_eq!(v["config"]["id"], "pk1");
}

#[test]
fn check_jensen_violation_exits_one() {
    let out = sugeno(&["check", "jensen", "--f", "1/x", "--domain", "0", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["result"]["holds"], false);
    assert!(v["result"]["slack"].as_f64().unwrap() < 0.0);
}

#[test]
fn check_gpk_with_cubic_map() {
    let out = sugeno(&[
        "check", "gpk", "--f", "x/2", "--bij", "x^3", "--inner", "riemann", "--domain", "0", "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    assert_eq!(v["config"]["bij"], "(x ^ 3)");
    assert_eq!(v["result"]["id"], "gpk1");
}

#[test]
fn check_hk_runs_on_shifted_domains() {
    let out = sugeno(&[
        "check",
        "hk",
        "--f",
        "1",
        "--phi",
        "exp(x)",
        "--domain",
        "1",
        "7.389056098930650",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    assert!((v["result"]["rhs"].as_f64().unwrap() - 2.0 * std::f64::consts::E).abs() < 1e-6);
}

#[test]
fn input_errors_exit_two() {
    // Unparsable expression.
    assert_eq!(
        sugeno(&["integrate", "sugeno", "--f", "ln(", "--domain", "0", "5"])
            .status
            .code(),
        Some(2)
    );
    // Bad domain order.
    assert_eq!(
        sugeno(&["integrate", "sugeno", "--f", "x", "--domain", "5", "2"])
            .status
            .code(),
        Some(2)
    );
    // pk checks need [0, b].
    assert_eq!(
        sugeno(&["check", "pk1", "--f", "x", "--domain", "1", "5"])
            .status
            .code(),
        Some(2)
    );
    // Unknown family.
    assert_eq!(
        sugeno(&["sweep", "pk1", "--family", "wavelets", "--trials", "2", "--domain", "0", "5"])
            .status
            .code(),
        Some(2)
    );
    // Non-monotone map.
    assert_eq!(
        sugeno(&["check", "gpk", "--f", "x", "--bij", "x^2", "--domain", "0", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numerical_failures_exit_three() {
    // Reciprocal measure diverges on [0, b] while f stays above every level.
    let out = sugeno(&[
        "integrate",
        "sugeno",
        "--f",
        "exp(1/x)",
        "--domain",
        "0",
        "5",
        "--measure",
        "reciprocal",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(!out.stderr.is_empty());
}

#[test]
fn sweep_json_reports_aggregates_and_exits_by_violations() {
    let out = sugeno(&[
        "sweep",
        "pk1",
        "--family",
        "affine_increasing",
        "--trials",
        "6",
        "--seed",
        "3",
        "--domain",
        "0",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    assert_eq!(v["result"]["trials"], 6);
    assert_eq!(v["result"]["violations"], 0);
    assert_eq!(v["result"]["seed"], 3);
    assert!(v["result"]["min_slack"].as_f64().unwrap() > 0.0);
    assert!(v["config"]["jobs"].as_u64().unwrap() >= 1);

    // Jensen sweeps violate and say so in the exit code.
    let out = sugeno(&[
        "sweep",
        "jensen",
        "--family",
        "affine_increasing",
        "--trials",
        "4",
        "--seed",
        "3",
        "--domain",
        "0",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_same_seed_is_byte_identical() {
    let run = |jobs: &str| {
        sugeno(&[
            "sweep", "pk2", "--family", "shifted", "--trials", "5", "--seed", "11", "--domain",
            "0", "5", "--jobs", jobs,
        ])
    };
    // Two runs of the same command: identical bytes.
    let a = run("2");
    let b = run("2");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // Different thread counts: the echoed jobs differ, the results must not.
    let c = run("1");
    let d = run("4");
    assert_eq!(json_of(&c)["result"], json_of(&d)["result"]);
}

#[test]
fn sweep_csv_emits_the_row_table() {
    let out = sugeno(&[
        "sweep",
        "pk1",
        "--family",
        "affine_increasing",
        "--trials",
        "3",
        "--seed",
        "1",
        "--domain",
        "0",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("trial,f,phi,a,b,lhs,rhs,slack,holds,error")
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn paper_examples_audit_quotes_both_values() {
    let out = sugeno(&["paper-examples"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    let notes = v["notes"].as_array().unwrap();
    let joined: String = notes
        .iter()
        .filter_map(|n| n.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    assert!(joined.contains("0.781"), "{joined}");
    assert!(joined.contains("1.6"), "{joined}");
    assert!(joined.contains("α·ln α = 1"), "{joined}");
    assert_eq!(v["result"]["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn emit_plot_writes_the_documented_csv() {
    let path = std::env::temp_dir().join(format!("sugeno-plot-{}.csv", std::process::id()));
    let path_str = path.to_str().unwrap();
    let out = sugeno(&[
        "emit-plot",
        "--f",
        "x/2",
        "--domain",
        "0",
        "5",
        "--out",
        path_str,
        "--points",
        "64",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    assert_eq!(v["result"]["path"], *path_str);
    assert_eq!(v["result"]["rows"], 64);
    assert!((v["result"]["value"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-6);

    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,F_alpha,min_alpha_F"));
    let mut prev = f64::NEG_INFINITY;
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 3, "{line}");
        let alpha: f64 = cols[0].parse().unwrap();
        assert!(alpha > prev, "alpha not strictly increasing at {line}");
        prev = alpha;
        rows += 1;
    }
    assert_eq!(rows, 64);
    std::fs::remove_file(&path).ok();
}

#[test]
fn version_and_help_exit_zero() {
    assert_eq!(sugeno(&["--version"]).status.code(), Some(0));
    let help = sugeno(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = String::from_utf8(help.stdout).unwrap();
    for sub in ["integrate", "check", "sweep", "paper-examples", "emit-plot"] {
        assert!(text.contains(sub), "help missing {sub}");
    }
}
