use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn chainwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn walk_hadamard_one_step() {
    let out = chainwalk(&["walk", "--nodes", "8", "--steps", "1", "--coin", "hadamard", "--backend", "scalar", "--start", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schemaVersion"], 1);
    let last: Vec<f64> = v["probabilities"][1]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    for (node, p) in last.iter().enumerate() {
        let want = if node == 3 || node == 6 { 0.5 } else { 0.0 };
        assert!((p - want).abs() < 1e-12, "node {node}: {p}");
    }
}

#[test]
fn walk_zero_steps_is_point_mass() {
    let out = chainwalk(&["walk", "--nodes", "8", "--steps", "0", "--start", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("step,node,probability"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[2], "0,2,1.0000000000000000e0");
    assert_eq!(rows[0], "0,0,0");
}

#[test]
fn odd_nodes_exit_two() {
    let out = chainwalk(&["walk", "--nodes", "9", "--steps", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_flag_exit_two() {
    assert_eq!(chainwalk(&["walk", "--bogus"]).status.code(), Some(2));
}

#[test]
fn statevector_scale_guard_exit_two() {
    let out = chainwalk(&["walk", "--nodes", "16", "--steps", "1", "--backend", "statevector"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn backends_agree_through_the_cli() {
    let mut results = Vec::new();
    for backend in ["scalar", "subspace", "statevector", "contracted"] {
        let out = chainwalk(&[
            "walk", "--nodes", "6", "--steps", "4", "--start", "2", "--backend", backend, "--swap-phase", "i",
        ]);
        assert_eq!(out.status.code(), Some(0), "{backend}");
        let v = stdout_json(&out);
        let rows: Vec<Vec<f64>> = serde_json::from_value(v["probabilities"].clone()).unwrap();
        results.push(rows);
    }
    for other in &results[1..] {
        for (a, b) in results[0].iter().zip(other) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn circuit_backend_refuses_phase_one() {
    let out = chainwalk(&["walk", "--nodes", "4", "--backend", "subspace", "--swap-phase", "one"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shots_require_seed_and_are_reproducible() {
    let base = ["walk", "--nodes", "8", "--steps", "3", "--start", "4", "--shots", "1000"];
    assert_eq!(chainwalk(&base).status.code(), Some(2));
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "42"]);
    let a = chainwalk(&seeded);
    let b = chainwalk(&seeded);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    let total: u64 = v["histogram"]["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|n| n.as_u64().unwrap())
        .sum();
    assert_eq!(total, 1000);
    assert_eq!(v["histogram"]["seed"], 42);
}

#[test]
fn contracted_histogram_uses_bit_labels() {
    let out = chainwalk(&[
        "walk", "--nodes", "6", "--steps", "0", "--start", "5", "--backend", "contracted", "--shots", "10", "--seed", "1",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["histogram"]["counts"]["101"], 10);
}

#[test]
fn emit_qasm_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.qasm");
    let out = chainwalk(&[
        "emit-qasm", "--nodes", "4", "--steps", "1", "--coin", "hadamard", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("fixtures/walk_d4_hadamard_1step.qasm");
    assert_eq!(fs::read_to_string(&path).unwrap(), golden);
    assert!(!golden.contains("creg"));
}

#[test]
fn emit_qasm_measure_flag() {
    let out = chainwalk(&["emit-qasm", "--nodes", "4", "--steps", "1", "--measure"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("creg c[4];"));
    assert!(text.contains("measure q[3] -> c[3];"));
}

#[test]
fn emit_qasm_general_gate_exit_two_with_hint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circuit.json");
    fs::write(
        &path,
        r#"{"width":2,"gates":[{"kind":"generalM","v":[[1,0],[0,0],[0,0],[1,0]],"u":[[1,0],[0,0],[0,0],[1,0]],"q":0}]}"#,
    )
    .unwrap();
    let out = chainwalk(&["emit-qasm", "--circuit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coin_to_params"));
}

#[test]
fn custom_coin_file() {
    let dir = tempfile::tempdir().unwrap();
    let coin = dir.path().join("coin.json");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    fs::write(&coin, format!("[[[{s},0],[{s},0]],[[{s},0],[-{s},0]]]")).unwrap();
    let a = chainwalk(&["walk", "--nodes", "8", "--steps", "3", "--coin-file", coin.to_str().unwrap()]);
    let b = chainwalk(&["walk", "--nodes", "8", "--steps", "3", "--coin", "hadamard"]);
    let (va, vb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(va["probabilities"], vb["probabilities"]);
    assert_eq!(va["coin"], "custom");

    fs::write(&coin, "[[[1,0],[1,0]],[[0,0],[1,0]]]").unwrap();
    let bad = chainwalk(&["walk", "--nodes", "8", "--coin-file", coin.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn start_file() {
    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("start.json");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    fs::write(&start, format!("[[0,0],[{s},0],[0,{s}],[0,0]]")).unwrap();
    let out = chainwalk(&["walk", "--nodes", "4", "--start-file", start.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v.get("start").is_none());
    assert!((v["probabilities"][0][1].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"nodes": 8, "steps": 2, "start": 4, "backend": "subspace", "format": "csv"}"#).unwrap();
    let out = chainwalk(&["walk", "--config", cfg.to_str().unwrap(), "--steps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 8);

    fs::write(&cfg, r#"{"nodes": 8, "colour": "blue"}"#).unwrap();
    assert_eq!(chainwalk(&["walk", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn validate_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = chainwalk(&[
        "validate", "--nodes", "8", "--steps", "5", "--tolerance", "1e-10", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["schemaVersion"], 1);
    assert!(v["legs"].as_array().unwrap().len() >= 6);
}

#[test]
fn validate_detects_injected_fault() {
    let out = chainwalk(&["validate", "--nodes", "8", "--steps", "5", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["pass"], false);
}

#[test]
fn validate_large_chain_skips_statevector() {
    let out = chainwalk(&["validate", "--nodes", "4096", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["skipped"].as_array().unwrap().len(), 1);
}

#[test]
fn bench_csv() {
    let out = chainwalk(&["bench", "--min-exp", "6", "--max-exp", "10", "--exp-step", "2", "--steps", "50", "--reps", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("backend,d,steps,total_seconds,seconds_per_step,reliable"));
    assert!(text.contains("\nsubspace,1024,50,"));
    assert!(text.contains("\nstatevector,12,50,"));
}

#[test]
fn bench_zero_steps_flagged() {
    let out = chainwalk(&["bench", "--min-exp", "6", "--max-exp", "8", "--steps", "0", "--no-statevector"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).filter(|l| !l.starts_with('#')).all(|l| l.ends_with(",false")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reliable=false"));
}

#[test]
fn deterministic_json_output() {
    let args = ["walk", "--nodes", "10", "--steps", "6", "--backend", "contracted"];
    assert_eq!(chainwalk(&args).stdout, chainwalk(&args).stdout);
}
