use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn phinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phinlab"))
        .args(args)
        .env_remove("PHINLAB_MAX_N")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn module_file(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const STEINBERG: &str = "steinberg.json";

#[test]
fn steinberg_is_admissible() {
    let path = data(STEINBERG);
    let out = phinlab(&["check-admissible", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["t_h"], "1");
    assert_eq!(v["t_n"], "1");
    assert_eq!(v["subspaces_checked"], 3);
    assert_eq!(v["mode"], "enumerated");

    let text = phinlab(&["check-admissible", path.to_str().unwrap()]);
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("weakly admissible: yes"));
}

#[test]
fn steinberg_consistency_records() {
    let path = data(STEINBERG);
    let out = phinlab(&["consistency", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["outcome"]["status"], "checked");
    let recs = v["outcome"]["records"].as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0], serde_json::json!({"r": 1, "hecke": "3", "galois": "3", "equal": true, "valuation": 0}));
    assert_eq!(recs[1], serde_json::json!({"r": 2, "hecke": "2", "galois": "2", "equal": true, "valuation": 1}));
}

#[test]
fn hecke_two_ways() {
    let out = phinlab(&["hecke", "--n", "3", "--r", "2", "--q", "2", "--psi", "1,2,4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    // q^{-1} e_2(1, 2, 4) = 14/2
    assert_eq!(v["closed"], "7");
    assert_eq!(v["enumerated"], "7");
    assert_eq!(v["equal"], true);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    let neg = phinlab(&["hecke", "--n", "2", "--r", "1", "--q", "3", "--psi", "-1/2,3"]);
    assert_eq!(neg.status.code(), Some(0));
}

#[test]
fn inadmissible_module_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = module_file(
        &dir,
        "bad_flag.json",
        r#"{"field": {"p": 2, "embeddings": ["k0"]}, "n": 2,
            "phi": [["1","0"],["0","2"]], "monodromy": [["0","1"],["0","0"]],
            "filtration": {"k0": {"flag": [["1","0"],["0","1"]], "jumps": [1, 0]}}}"#,
    );
    let out = phinlab(&["check-admissible", &f, "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["admissible"], false);
    assert_eq!(v["witness"]["subspace"], serde_json::json!([["1", "0"]]));
    assert_eq!(v["witness"]["t_h"], "1");
    assert_eq!(v["witness"]["t_n"], "0");
    let text = phinlab(&["check-admissible", &f]);
    assert_eq!(text.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&text.stdout).contains("weakly admissible: no"));
}

#[test]
fn linked_segments_are_not_generic() {
    let dir = tempfile::tempdir().unwrap();
    let f = module_file(
        &dir,
        "linked.json",
        r#"{"field": {"p": 2, "embeddings": ["k0"]}, "n": 2,
            "phi": [["1","0"],["0","2"]], "monodromy": [["0","0"],["0","0"]],
            "filtration": {"k0": {"flag": [["1","0"],["0","1"]], "jumps": [0, 1]}}}"#,
    );
    let out = phinlab(&["consistency", &f, "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["outcome"]["status"], "not_generic");
    let seg = phinlab(&["segments", &f, "--format", "json"]);
    assert_eq!(seg.status.code(), Some(0));
    assert_eq!(json_of(&seg)["generic"], false);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = module_file(&dir, "m.json", "{\"field\": {\"p\": 2,\n  \"embeddings\": [\"k0\"]");
    let out = phinlab(&["wd", &malformed]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let schema = module_file(
        &dir,
        "s.json",
        r#"{"field": {"p": 2, "embeddings": ["k0"]}, "n": 1, "phi": [["1/0"]], "monodromy": [["0"]],
            "filtration": {"k0": {"flag": [["1"]], "jumps": [0]}}}"#,
    );
    let out = phinlab(&["wd", &schema, "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["error"], "input");
    assert!(v["message"].as_str().unwrap().contains("phi[0][0]"));

    let relation = module_file(
        &dir,
        "r.json",
        r#"{"field": {"p": 3, "embeddings": ["k0"]}, "n": 2,
            "phi": [["1","0"],["0","1"]], "monodromy": [["0","1"],["0","0"]],
            "filtration": {"k0": {"flag": [["1","0"],["0","1"]], "jumps": [0, 1]}}}"#,
    );
    let out = phinlab(&["check-admissible", &relation]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1)"));

    let out = phinlab(&["wd", "/nonexistent/module.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = phinlab(&["hecke", "--n", "2", "--r", "3", "--q", "2", "--psi", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = phinlab(&["hecke", "--n", "2", "--r", "1", "--q", "2", "--psi", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_cap_from_environment() {
    let path = data(STEINBERG);
    let out = Command::new(env!("CARGO_BIN_EXE_phinlab"))
        .args(["wd", path.to_str().unwrap()])
        .env("PHINLAB_MAX_N", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PHINLAB_MAX_N"));
}

#[test]
fn repeated_eigenvalues_need_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let f = module_file(
        &dir,
        "scalar.json",
        r#"{"field": {"p": 5, "embeddings": ["k0"]}, "n": 2,
            "phi": [["5","0"],["0","5"]], "monodromy": [["0","0"],["0","0"]],
            "filtration": {"k0": {"flag": [["1","0"],["0","1"]], "jumps": [0, 2]}}}"#,
    );
    let out = phinlab(&["check-admissible", &f]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--candidates"));
    let cands = module_file(&dir, "c.json", r#"[[["1","0"]], [["1","1"]]]"#);
    let out = phinlab(&["check-admissible", &f, "--candidates", &cands, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["mode"], "relative_to_candidates");
    assert_eq!(v["subspaces_checked"], 2);
}

#[test]
fn strata_and_wd() {
    let path = data(STEINBERG);
    let out = phinlab(&["strata", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["partition"], serde_json::json!({"k0": [2]}));
    assert_eq!(v["kernel_dims"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["strata"][0], serde_json::json!({"partition": [2], "thresholds": [1, 2], "member": true}));
    assert_eq!(v["strata"][1], serde_json::json!({"partition": [1, 1], "thresholds": [2, 2], "member": false}));
    let out = phinlab(&["wd", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(json_of(&out)["frobenius"], serde_json::json!([["1", "0"], ["0", "2"]]));
}

#[test]
fn beta_reports_valuations() {
    let path = data(STEINBERG);
    let out = phinlab(&["beta", path.to_str().unwrap(), "--xi", r#"{"k0":[0,-1]}"#, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["values"][1]["value"], serde_json::json!({"coeff": "2", "pi_exponent": 1}));
    assert_eq!(v["values"][1]["valuation"], 2);
    let out = phinlab(&["beta", path.to_str().unwrap(), "--xi", r#"{"k1":[0,0]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_is_byte_identical() {
    let a = phinlab(&["sweep", "--seed", "9", "--cases", "3", "--format", "json"]);
    let b = phinlab(&["sweep", "--seed", "9", "--cases", "3", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["seed"], 9);
}
