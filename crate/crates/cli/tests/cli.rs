//! CLI contract tests: exit codes, output round-trips, thread-count
//! independence, and the moduli-table override.

use std::collections::BTreeMap;
use std::process::{Command, Output};
use std::sync::Arc;

use nlkit_core::field::{FieldContext, FieldElement};
use nlkit_core::TruthTable;

fn nlkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlkit"))
        .args(args)
        .env_remove("NLKIT_MODULI")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = nlkit(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn thread_count_never_changes_output() {
    let matrix: &[&[&str]] = &[
        &["spectrum", "--n", "6", "--d", "7", "--format", "csv"],
        &["spectrum", "--n", "5", "--d", "x7"],
        &["nl", "--n", "5", "--d", "7", "--order", "2"],
        &["kernel", "--n", "5", "--d", "7", "--a", "1"],
        &["dist", "--family", "x7", "--n", "8"],
        &["dist", "--family", "x2r3", "--n", "6", "--format", "csv"],
        &["dist", "--family", "x15", "--n", "6", "--a", "3"],
        &["bound", "--family", "kasami-chain", "--n", "10", "--r", "3"],
        &["tables", "--which", "theorem3-even", "--format", "csv"],
        &["verify", "--suite", "h-degrees"],
        &["verify", "--suite", "weil", "--format", "csv"],
    ];
    for args in matrix {
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut four = args.to_vec();
        four.extend(["--threads", "4"]);
        assert_eq!(
            stdout_of(&one),
            stdout_of(&four),
            "thread count changed output of {args:?}"
        );
    }
}

#[test]
fn exit_codes() {
    // Success.
    assert_eq!(nlkit(&["tables", "--which", "theorem3-odd"]).status.code(), Some(0));
    // Usage errors exit 2.
    assert_eq!(nlkit(&["tables", "--which", "nope"]).status.code(), Some(2));
    assert_eq!(nlkit(&["bound", "--family", "zzz", "--n", "8"]).status.code(), Some(2));
    assert_eq!(nlkit(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(nlkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(nlkit(&["kernel", "--n", "5", "--d", "7", "--b", "2"]).status.code(), Some(2));
    // Runtime failures exit 1.
    assert_eq!(nlkit(&["bound", "--family", "x7", "--n", "3"]).status.code(), Some(1));
    assert_eq!(
        nlkit(&["nl", "--n", "6", "--d", "7", "--order", "2", "--budget", "4"]).status.code(),
        Some(1)
    );
    // Degree guard: a cubic function has no linear kernel.
    assert_eq!(nlkit(&["kernel", "--n", "5", "--d", "7"]).status.code(), Some(1));
}

#[test]
fn spectrum_csv_roundtrips_against_the_library() {
    let text = stdout_of(&["spectrum", "--n", "5", "--d", "7", "--format", "csv"]);
    let ctx = Arc::new(FieldContext::new(5).unwrap());
    let expected = TruthTable::trace_monomial(ctx, FieldElement::ONE, 7).walsh_transform();
    let mut parsed = vec![0i32; 32];
    let mut rows = 0;
    for line in text.lines() {
        let (alpha, v) = line.split_once(',').unwrap();
        parsed[usize::from_str_radix(alpha, 16).unwrap()] = v.parse().unwrap();
        rows += 1;
    }
    assert_eq!(rows, 32);
    assert_eq!(parsed, expected.values());
}

#[test]
fn dist_json_roundtrips_against_the_library() {
    let text = stdout_of(&["dist", "--family", "x7", "--n", "6"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let counts: BTreeMap<u32, u64> = v["counts"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, v)| (k.parse().unwrap(), v.as_u64().unwrap()))
        .collect();
    let ctx = Arc::new(FieldContext::new(6).unwrap());
    let hist = nlkit_core::quadratic::kernel_dim_sweep_first(&ctx, 7).unwrap();
    assert_eq!(counts, hist.counts);
    assert_eq!(v["degenerate"].as_u64(), Some(0));
    assert_eq!(v["sweep"]["n"].as_u64(), Some(6));
}

#[test]
fn bound_json_has_the_documented_keys() {
    let text = stdout_of(&["bound", "--family", "inverse", "--n", "12", "--r", "4"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["family", "n", "r", "lower_bound", "closed_form", "recursion", "asymptotic"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["family"].as_str(), Some("inverse"));
}

#[test]
fn out_flag_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("nlkit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tables.csv");
    let out = nlkit(&[
        "tables",
        "--which",
        "theorem3-odd",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("7,12\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn moduli_override_is_honored() {
    let dir = std::env::temp_dir().join(format!("nlkit-moduli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("moduli.txt");
    // 0x19 = x^4 + x^3 + 1 instead of the default 0x13 = x^4 + x + 1.
    std::fs::write(&path, "4\t19\n").unwrap();
    let with_override = Command::new(env!("CARGO_BIN_EXE_nlkit"))
        .args(["spectrum", "--n", "4", "--d", "7", "--format", "csv"])
        .env("NLKIT_MODULI", path.to_str().unwrap())
        .output()
        .unwrap();
    assert!(with_override.status.success());
    let default = nlkit(&["spectrum", "--n", "4", "--d", "7", "--format", "csv"]);
    // Different modulus, different element encoding, different spectrum order.
    assert_ne!(with_override.stdout, default.stdout);
    // A reducible override is rejected.
    std::fs::write(&path, "4\t15\n").unwrap(); // 0x15 = x^4+x^2+1 = (x^2+x+1)^2
    let bad = Command::new(env!("CARGO_BIN_EXE_nlkit"))
        .args(["spectrum", "--n", "4", "--d", "7"])
        .env("NLKIT_MODULI", path.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_report_schema() {
    let text = stdout_of(&["verify", "--suite", "weil", "--seed", "5"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["suite"].as_str(), Some("weil"));
    assert_eq!(v["seed"].as_u64(), Some(5));
    assert!(v["grid"].as_str().is_some());
    let cases = v["cases"].as_array().unwrap();
    assert!(!cases.is_empty());
    for c in cases {
        assert!(c.get("params").is_some());
        assert!(matches!(c["status"].as_str(), Some("pass" | "fail" | "skipped")));
        assert!(c.get("expected").is_some() && c.get("got").is_some());
    }
}
