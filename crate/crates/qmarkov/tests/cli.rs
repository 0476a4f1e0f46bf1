//! End-to-end runs of the qmarkov binary against the bundled model.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn model_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("models/five_level.json")
}

fn qmarkov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmarkov"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Basis vector as a state file in the 5-level model.
fn write_state(dir: &TempDir, name: &str, index: usize) -> PathBuf {
    let mut entries = vec![[0.0f64; 2]; 5];
    entries[index][0] = 1.0;
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::json!({ "pure": entries }).to_string()).unwrap();
    path
}

/// Span of computational basis vectors as a subspace file.
fn write_span(dir: &TempDir, name: &str, indices: &[usize]) -> PathBuf {
    let vectors: Vec<Vec<[f64; 2]>> = indices
        .iter()
        .map(|&k| {
            let mut v = vec![[0.0f64; 2]; 5];
            v[k][0] = 1.0;
            v
        })
        .collect();
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::json!({ "vectors": vectors }).to_string()).unwrap();
    path
}

#[test]
fn decompose_reports_expected_shape() {
    let model = model_path();
    let out = qmarkov(&["decompose", model.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["bscc_dimensions"], serde_json::json!([2, 2]));
    assert_eq!(report["transient_dimension"], 1);

    let human = qmarkov(&["decompose", model.to_str().unwrap()]);
    assert!(human.status.success());
    assert!(stdout(&human).contains("2 BSCC(s), transient dimension 1"));
}

#[test]
fn check_bscc_exit_codes_answer_the_question() {
    let dir = TempDir::new().unwrap();
    let model = model_path();
    let yes = write_span(&dir, "b1.json", &[0, 1]);
    let no = write_span(&dir, "top.json", &[4]);

    let out = qmarkov(&["check-bscc", model.to_str().unwrap(), yes.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("BSCC: yes"));

    let out = qmarkov(&["check-bscc", model.to_str().unwrap(), no.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("BSCC: no"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let out = qmarkov(&["check-bscc", model.to_str().unwrap(), garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn reach_with_oracle_check_agrees() {
    let dir = TempDir::new().unwrap();
    let model = model_path();
    let state = write_state(&dir, "one.json", 1);
    let target = write_span(&dir, "ground.json", &[0]);

    let out = qmarkov(&[
        "reach",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
        target.to_str().unwrap(),
        "--oracle-check",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("reach probability: 1.000000000"), "{text}");
    assert!(text.contains("oracle check:"), "{text}");
    assert!(text.contains("converged"), "{text}");

    let json = qmarkov(&[
        "reach",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
        target.to_str().unwrap(),
        "--oracle-check",
        "--json",
    ]);
    let report: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!((report["probability"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((report["oracle_value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(report["oracle_steps"].as_u64().unwrap() > 0);
}

#[test]
fn persistence_and_repeated_reach_report_witnesses() {
    let dir = TempDir::new().unwrap();
    let model = model_path();
    let state = write_state(&dir, "three.json", 3);
    let target = write_span(&dir, "low.json", &[0, 1, 2]);

    let out = qmarkov(&[
        "persist",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("persistence probability: 0.000000000"), "{text}");
    assert!(text.contains("satisfaction subspace dimension: 2"), "{text}");

    let out = qmarkov(&[
        "repreach",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("repeated-reach probability: 1.000000000"), "{text}");
    assert!(text.contains("satisfaction subspace dimension: 4"), "{text}");
}

#[test]
fn transient_target_prints_adjustment_note() {
    let dir = TempDir::new().unwrap();
    let model = model_path();
    let state = write_state(&dir, "zero.json", 0);
    let target = write_span(&dir, "mixed.json", &[0, 4]);

    let out = qmarkov(&[
        "repreach",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(
        stderr(&out).contains("effective target dimension 1 of 2"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn reachable_space_from_decaying_level() {
    let dir = TempDir::new().unwrap();
    let model = model_path();
    let state = write_state(&dir, "top.json", 4);
    let out = qmarkov(&[
        "reachable",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("reachable subspace: dimension 5"));
}

#[test]
fn gen_walk_output_feeds_back_into_decompose() {
    let dir = TempDir::new().unwrap();
    let walk = dir.path().join("walk.json");
    let out = qmarkov(&[
        "gen-walk",
        "--size",
        "3",
        "--boundary",
        "0",
        "--output",
        walk.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let decomposed = qmarkov(&["decompose", walk.to_str().unwrap(), "--json"]);
    assert!(decomposed.status.success(), "stderr: {}", stderr(&decomposed));
    let report: Value = serde_json::from_str(&stdout(&decomposed)).unwrap();
    assert!(report["bscc_dimensions"].as_array().is_some());

    let streamed = qmarkov(&["gen-walk", "--size", "3"]);
    assert!(streamed.status.success());
    let model: Value = serde_json::from_str(&stdout(&streamed)).unwrap();
    assert_eq!(model["dimension"], 6);
}

#[test]
fn bad_tolerance_is_rejected() {
    let model = model_path();
    let out = qmarkov(&["decompose", model.to_str().unwrap(), "--tolerance", "2.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("tolerance"), "stderr: {}", stderr(&out));
}

#[test]
fn unnormalized_state_warns_and_proceeds() {
    let dir = TempDir::new().unwrap();
    let model = model_path();
    let mut entries = vec![[0.0f64; 2]; 5];
    entries[1][0] = 2.0;
    let state = dir.path().join("big.json");
    std::fs::write(&state, serde_json::json!({ "pure": entries }).to_string()).unwrap();
    let target = write_span(&dir, "ground.json", &[0]);

    let out = qmarkov(&[
        "reach",
        model.to_str().unwrap(),
        state.to_str().unwrap(),
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("renormalized"));
    assert!(stdout(&out).contains("reach probability: 1.000000000"));
}
