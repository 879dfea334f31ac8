use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const GENERIC: &str = "[map]\nfamily = \"random\"\ndegrees = [[1, 1], [1, 2]]\nseed = 3\n";

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_blaschke"))
        .args(args)
        .arg("--config")
        .arg(&path)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_named_family() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[map]\nfamily = \"low-top-degree\"\n[params]\nstrategy = \"numeric\"\n";
    let r = json(&run(dir.path(), cfg, &["classify"]));
    assert_eq!(r["result"]["case"], "II");
    assert_eq!(r["result"]["d_top"], 5);
    assert_eq!(r["result"]["c_plus"], "(6+sqrt(32))/2");
    assert_eq!(r["result"]["witness"]["p_at_d_top"], -4);
}

#[test]
fn degrees_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&run(dir.path(), GENERIC, &["degrees"]));
    assert_eq!(r["result"]["measured"], serde_json::json!([5, 13, 34]));
    let o = run(dir.path(), GENERIC, &["degrees", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "n,measured,predicted\n1,5,5\n2,13,13\n3,34,34\n");
}

#[test]
fn command_from_config_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("command = \"winding\"\n{GENERIC}");
    let o = run(dir.path(), &cfg, &["--out", "w.json"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("w.json")).unwrap()).unwrap();
    assert_eq!(r["command"], "winding");
    assert!(r["result"]["iterates"].as_array().unwrap().iter().all(|i| i["matches"] == true));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{GENERIC}[params]\ndepth = 2\nsamples = 16\n");
    let a = run(dir.path(), &cfg, &["preimage-measure", "--seed", "9"]);
    let b = run(dir.path(), &cfg, &["preimage-measure", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["provenance"]["seed"], 9);
}

#[test]
fn echoed_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[map]\na = [[2, 8, 0, 1], [0, 1, 1, 3]]\nb = [[-1, 5, 0, 1]]\nc = [[1, 6, 1, 6]]\nd = [[0, 1, -1, 7]]\n";
    let first = json(&run(dir.path(), cfg, &["lift"]));
    let echoed = toml::to_string(&first["config"]).unwrap();
    let second = json(&run(dir.path(), &echoed, &["lift"]));
    assert_eq!(first, second);
    assert_eq!(first["config"]["map"]["a"][0], serde_json::json!([1, 4, 0, 1]));
}

#[test]
fn exit_codes_by_class() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str], i32, &str); 5] = [
        ("[map]\nfamily = \"monomial\"\n", &["lift"], 3, "MissingField"),
        ("[map\n", &["lift"], 2, "ParseError"),
        (GENERIC, &["frobnicate"], 3, "UnknownCommand"),
        ("[map]\na = [[1, 1, 0, 1], [0, 1, 0, 1]]\nb = [[0, 1, 0, 1]]\nc = [[0, 1, 0, 1]]\nd = [[0, 1, 0, 1]]\n", &["lift"], 3, "ZeroOutsideDisc"),
        (GENERIC, &["indeterminacy", "--format", "xml"], 3, "UnknownFormat"),
    ];
    for (cfg, args, code, name) in cases {
        let o = run(dir.path(), cfg, args);
        assert_eq!(o.status.code(), Some(code), "{name}");
        let e: Value = serde_json::from_slice(&o.stderr).unwrap();
        assert_eq!(e["error"]["code"], name);
    }
    let cfg = format!("{GENERIC}[params]\nmax_terms = 10\n");
    let o = run(dir.path(), &cfg, &["lift"]);
    assert_eq!(o.status.code(), Some(5));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["code"], "ResourceBudget");
    // degree sequences stop at the budget instead of failing
    let r = json(&run(dir.path(), &cfg, &["degrees"]));
    assert_eq!(r["result"]["truncated_at"], 2);
    assert_eq!(r["result"]["measured"], serde_json::json!([5]));
}

#[test]
fn reproduction_suite() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_blaschke"))
        .args(["reproduce-paper", "--out", "rep"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    let s = json(&o);
    assert_eq!(s["passed"], s["total"], "{s}");
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("rep/summary.json")).unwrap()).unwrap();
    assert_eq!(on_disk, s);
    assert!(dir.path().join("rep/torus-entropy.json").exists());
}
