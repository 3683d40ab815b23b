//! End-to-end runs of the `quartic-pd` binary.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_quartic-pd")).args(args).output().expect("spawn");
    Out {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = run(&full);
    assert!(out.stderr.is_empty(), "{}", out.stderr);
    (out.code, serde_json::from_str(&out.stdout).expect("json output"))
}

fn corpus() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

fn without_timings(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn cyclic_interval_shorthand() {
    let (code, v) = json(&["check", "--cyclic", "1 -1 1 1 -1/6"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"]["class"], "positive-definite");
    assert_eq!(v["verdict"]["rule"], "cyclic-pd-interval");
}

#[test]
fn binary_square_psd() {
    let (code, v) = json(&["check", "--psd", "--binary", "1 0 -1/3 0 1"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"]["class"], "positive-semidefinite-not-definite");
}

#[test]
fn cyclic_counterexample_witness() {
    let (code, v) = json(&["check", "--cyclic", "1 1 1 1 -7/12"]);
    assert_eq!(code, 2);
    assert_eq!(v["witness"], serde_json::json!(["1", "1", "-5"]));
    let text = run(&["check", "--cyclic", "1 1 1 1 -7/12"]);
    assert!(text.stdout.contains("witness: (1, 1, -5)"), "{}", text.stdout);
}

#[test]
fn exit_code_contract_on_corpus() {
    let expected = [
        ("binary_boundary.txt", 1),
        ("binary_indefinite.txt", 2),
        ("binary_square.txt", 1),
        ("binary_unit_middle.json", 0),
        ("binary_zero_diagonal.txt", 1),
        ("cyclic_boundary.txt", 1),
        ("cyclic_counterexample.txt", 2),
        ("cyclic_interval.json", 0),
        ("cyclic_lifted.txt", 0),
        ("cyclic_scaled.json", 0),
        ("diag_ones_3.json", 0),
        ("general_3.txt", 0),
        ("general_indefinite_3.json", 2),
        ("pair_indefinite_3.txt", 2),
        ("relaxed_lower.txt", 0),
        ("relaxed_upper.txt", 0),
        ("zero_3.json", 3),
    ];
    let files = corpus();
    assert_eq!(files.len(), expected.len());
    for (path, (name, code)) in files.iter().zip(expected) {
        assert!(path.ends_with(name), "{path:?}");
        let out = run(&["check", path.to_str().unwrap()]);
        assert_eq!(out.code, code, "{name}: {}", out.stdout);
    }
}

#[test]
fn input_errors_exit_64_and_name_the_field() {
    let out = run(&["check", "--cyclic", "1 -1 x 1 0"]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("cyclic[2]"), "{}", out.stderr);

    let dir = std::env::temp_dir().join(format!("quartic-pd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "entries": [{"index": [1, 1, 1], "value": "1"}]}"#).unwrap();
    let out = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("entries[0].index"), "{}", out.stderr);

    let out = run(&["check", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(out.code, 64);
    let out = run(&["check", "--frobnicate"]);
    assert_eq!(out.code, 64);
    let four = dir.join("four.txt");
    std::fs::write(&four, "dim 4\n1 1 1 1 1\n").unwrap();
    let out = run(&["check", "--oracle-only", four.to_str().unwrap()]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("got 4"), "{}", out.stderr);
}

#[test]
fn minimize_reports() {
    let diag = corpus().into_iter().find(|p| p.ends_with("diag_ones_3.json")).unwrap();
    let out = run(&["minimize", diag.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("min 0.333333 at (0.577350, 0.577350, 0.577350)"), "{}", out.stdout);
    assert!(out.stdout.contains("zero set: empty"));

    let out = run(&["minimize", "--cyclic", "1 -1 1 1 -7/12"]);
    assert!(out.stdout.contains("at (0.577350, 0.577350, 0.577350)"), "{}", out.stdout);
    assert!(out.stdout.contains("(-0.577350, -0.577350, -0.577350)"), "{}", out.stdout);

    let zero = corpus().into_iter().find(|p| p.ends_with("zero_3.json")).unwrap();
    let (_, v) = json(&["minimize", zero.to_str().unwrap()]);
    assert_eq!(v["zero_set"]["degenerate"], true);
    assert_eq!(v["min_value"], 0.0);
}

#[test]
fn inequality_catalog() {
    let out = run(&["inequalities"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(!out.stdout.contains("unexpected"));

    let (code, v) = json(&["inequalities", "--only", "19u"]);
    assert_eq!(code, 0);
    let items = v["inequalities"].as_array().unwrap();
    assert_eq!(items.len(), 1);
    assert_eq!(items[0]["status"], "HOLDS(equality)");
    assert_eq!(items[0]["equality_points"].as_array().unwrap().len(), 2);

    let out = run(&["inequalities", "--only", "19-14-14"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("FAIL(expected)"), "{}", out.stdout);
    assert!(out.stdout.contains("(-1.2, 5, 1) P = -23.2384"), "{}", out.stdout);

    let out = run(&["inequalities", "--only", "nope"]);
    assert_eq!(out.code, 64);

    let (code, v) = json(&["inequalities", "--exchanged", "--only", "19-17-15x", "--only", "41/3ux"]);
    assert_eq!(code, 0);
    assert_eq!(v["inequalities"].as_array().unwrap().len(), 2);
}

#[test]
fn json_output_is_deterministic() {
    for path in corpus() {
        let p = path.to_str().unwrap();
        let (_, a) = json(&["check", p]);
        let (_, b) = json(&["check", p]);
        let (_, c) = json(&["check", p, "--sequential"]);
        let a = without_timings(a);
        assert_eq!(a, without_timings(b), "{p}");
        assert_eq!(a, without_timings(c), "{p}");
        let trace = a["trace"].as_array().unwrap();
        assert!(trace.iter().any(|s| s["class"] == a["verdict"]["class"] && s["rule"] == a["verdict"]["rule"]), "{p}");
    }
}

/// Whenever an analytic stage decides, the oracle alone must not contradict it.
#[test]
fn oracle_only_agrees_with_analytic_stages() {
    for path in corpus() {
        let p = path.to_str().unwrap();
        for psd in [false, true] {
            let mut args = vec!["check", p];
            if psd {
                args.push("--psd");
            }
            let (_, full) = json(&args);
            let last = full["trace"].as_array().unwrap().last().unwrap().clone();
            if last["stage"] == "oracle" {
                continue;
            }
            args.push("--oracle-only");
            let (_, oracle) = json(&args);
            let analytic = full["verdict"]["class"].as_str().unwrap();
            let numeric = oracle["verdict"]["class"].as_str().unwrap();
            let min = oracle["min_value"].as_f64().unwrap();
            let ok = match analytic {
                "positive-definite" => numeric != "indefinite" && min > -1e-8,
                "indefinite" => numeric != "positive-definite" && min < 1e-8,
                "positive-semidefinite" => numeric != "indefinite" && min > -1e-8,
                "positive-semidefinite-not-definite" => numeric == "undetermined" && min.abs() <= 1e-8,
                other => panic!("{p}: analytic stage reported {other}"),
            };
            assert!(ok, "{p} psd={psd}: analytic {analytic}, oracle {numeric} (min {min:e})");
        }
    }
}
