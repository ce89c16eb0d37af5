use std::path::Path;
use std::process::{Command, Output};

use mub_core::equivalence::d5_triple;
use serde_json::Value;

fn atlas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mub-atlas"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_set(dir: &Path, name: &str, k: u32) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&d5_triple(k)).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_counts() {
    let out = atlas(&["solve", "-d", "2", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["solution"]["discrete"].as_array().unwrap().len(), 2);

    let out = atlas(&["solve", "-d", "4", "-x", "1.5707963268", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["solution"]["families"].as_array().unwrap().len(), 12);
}

#[test]
fn solve_d5_with_oracle() {
    let out = atlas(&["solve", "-d", "5", "--oracle", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["oracle"]["matched"], 20);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn solve_rejects_bad_arguments() {
    assert_ne!(code(&atlas(&["solve", "-d", "4"])), 0);
    assert_ne!(code(&atlas(&["solve", "-d", "3", "-x", "0.5"])), 0);
    assert_ne!(code(&atlas(&["solve", "-d", "9"])), 0);
}

#[test]
fn classify_rows() {
    let out = atlas(&["classify", "-d", "3", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        json(&out)["counts"],
        serde_json::json!([{ "finite": 1 }, { "finite": 1 }, { "finite": 1 }, null, null])
    );

    let out = atlas(&["classify", "-d", "5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().eq(["triples", "2"])));
}

#[test]
fn classify_out_of_range_is_a_usage_error() {
    let out = atlas(&["classify", "-d", "7"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2..=5"));
}

#[test]
fn equiv_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write_set(dir.path(), "t1.json", 1);
    let t2 = write_set(dir.path(), "t2.json", 2);
    let t4 = write_set(dir.path(), "t4.json", 4);
    assert_eq!(code(&atlas(&["equiv", &t1, &t2])), 1);
    assert_eq!(code(&atlas(&["equiv", &t1, &t1])), 0);
    assert_eq!(code(&atlas(&["equiv", &t1, &t4])), 0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&atlas(&["equiv", &t1, bad.to_str().unwrap()])), 3);
    assert_eq!(code(&atlas(&["equiv", &t1, "/nonexistent/set.json"])), 3);
}

#[test]
fn outputs_reference_the_manifest_and_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write_set(dir.path(), "t1.json", 1);
    let t2 = write_set(dir.path(), "t2.json", 2);
    let runs: Vec<String> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("run{i}"));
            let out = out.to_str().unwrap();
            assert_eq!(code(&atlas(&["equiv", &t1, &t2, "--out", out])), 1);
            let cert = std::fs::read_to_string(Path::new(out).join("certificate.json")).unwrap();
            let manifest: Value =
                serde_json::from_str(&std::fs::read_to_string(Path::new(out).join("manifest.json")).unwrap()).unwrap();
            assert_eq!(manifest["outputs"], serde_json::json!(["certificate.json"]));
            assert_eq!(
                serde_json::from_str::<Value>(&cert).unwrap()["manifest"],
                "manifest.json"
            );
            cert
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn equiv_reads_its_own_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve");
    let t1 = write_set(dir.path(), "t1.json", 1);
    let wrapped = dir.path().join("wrapped.json");
    let set: Value = serde_json::from_str(&std::fs::read_to_string(&t1).unwrap()).unwrap();
    std::fs::write(
        &wrapped,
        serde_json::json!({ "manifest": "manifest.json", "data": set }).to_string(),
    )
    .unwrap();
    assert_eq!(
        code(&atlas(&[
            "equiv",
            &t1,
            wrapped.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ])),
        0
    );
}

#[test]
fn verify_passes() {
    let out = atlas(&["verify", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["complete_sets"].as_array().unwrap().len(), 4);
    assert!(v["complete_sets"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["passed"] == true));
}

#[test]
fn oracle_reports_clusters() {
    let out = atlas(&["oracle", "-d", "3", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["clusters"].as_array().unwrap().len(), 6);
}
