use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_provtop")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?} printed invalid JSON: {e}"))
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const FORK2: &str = r#"{"order": [[0, 1], [0, 2]], "mode": "upset"}"#;

#[test]
fn gl_verbs() {
    assert_eq!(json_of(&["gl", "prove", "[0]([0]p->p)->[0]p"]), json!({"provable": true}));
    let v = json_of(&["gl", "prove", "p -> [0]p"]);
    assert_eq!(v["provable"], false);
    assert_eq!(v["countermodel"]["tree"]["parent"], json!([null, 0]));
    assert_eq!(json_of(&["gl", "sat", "<0>T & [0]F"])["satisfiable"], false);
    assert_eq!(json_of(&["gl", "countermodel", "[0]([0]p->p)->[0]p"]), Value::Null);
    assert_eq!(json_of(&["gl3", "prove", "<0>p & <0>q -> <0>(p&q) | <0>(p & <0>q) | <0>(<0>p & q)"])["provable"], true);
}

#[test]
fn space_verbs() {
    let f = file(FORK2);
    let path = f.path().to_str().unwrap();
    let r = json_of(&["space", "classify", path]);
    assert_eq!(r["primal"], false);
    assert_eq!(r["scattered"], true);
    assert_eq!(r["rank_of_point"], json!([1, 0, 0]));
    assert_eq!(json_of(&["space", "plus", FORK2])["opens"].as_array().unwrap().len(), 8);
    let d = json_of(&[
        "space",
        "dsum",
        r#"{"base": {"points": 2, "opens": [[], [0], [1], [0, 1]]}, "plugins": {"1": {"order": [[0, 1]], "mode": "upset"}}}"#,
    ]);
    assert_eq!(d["projection"], json!([0, 1, 1]));
    let g = json_of(&["space", "glpcheck", &format!(r#"{{"topologies": [{FORK2}, {{"points": 3, "opens": [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]}}]}}"#)]);
    assert_eq!(g["holds"], true);
    let m = json_of(&["space", "modelcheck", FORK2, "<0>p", r#"{"p": [1]}"#]);
    assert_eq!(m["truth_set"], json!([0]));
    let m = json_of(&["space", "modelcheck", FORK2, "<0>p & <0>q -> <0>(p&q) | <0>(p & <0>q) | <0>(<0>p & q)"]);
    assert_eq!(m["valid"], false);
}

#[test]
fn tree_verbs() {
    assert_eq!(json_of(&["tree", "fork", "2"]), json!({"parent": [null, 0, 0]}));
    let t = json_of(&["tree", "dsum", r#"{"base": {"parent": [null, 0]}, "plugins": {"1": {"parent": [null, 0, 0]}}}"#]);
    assert_eq!(t["parent"].as_array().unwrap().len(), 4);
    let e = json_of(&["tree", "export", r#"{"parent": [null, 0]}"#]);
    assert!(e["dot"].as_str().unwrap().contains("n0 -> n1"));
}

#[test]
fn ordinal_verbs() {
    assert_eq!(json_of(&["ord", "cmp", "w+1", "w*2"]), json!({"cmp": "<"}));
    assert_eq!(json_of(&["ord", "add", "3", "w"]), json!({"sum": "w"}));
    assert_eq!(json_of(&["ord", "ell", "w^{2}+w^{3}"]), json!({"ell": "3"}));
}

#[test]
fn dmap_verbs() {
    let fork3 = r#"{"parent": [null, 0, 0, 0]}"#;
    let b = json_of(&["dmap", "build", fork3]);
    assert_eq!(b["dom"], "w+1");
    assert_eq!(b["least_preimages"], json!(["w", "0", "1", "2"]));
    assert_eq!(json_of(&["dmap", "apply", fork3, "4"]), json!({"node": 2}));
    assert_eq!(json_of(&["dmap", "preimage", fork3, "0"]), json!({"least": "w"}));
    let r = json_of(&["dmap", "refute", "p -> [0]p"]);
    assert_eq!((r["dom"].clone(), r["point"].clone()), (json!("w+1"), json!("w")));
    assert_eq!(r["valuation"], json!({"p": [0]}));
    assert_eq!(json_of(&["dmap", "refute", "[0]p -> [0][0]p"]), json!({"provable": true}));
}

#[test]
fn icard_verbs() {
    assert_eq!(json_of(&["icard", "entail", "<1>T", "<0><0>T"]), json!({"provable": true, "min": "w"}));
    assert_eq!(json_of(&["icard", "min", "<2>T"]), json!({"min": "w^{w}"}));
    assert_eq!(json_of(&["icard", "eval", "<1>T & ~<1><1>T", "w"]), json!({"holds": true}));
    assert_eq!(json_of(&["icard", "decide", "T -> <0>T"]), json!({"provable": false, "min": "0", "refuted_at": "0"}));
    assert_eq!(json_of(&["icard", "trichotomy", "<1>T", "<0>T"]), json!({"relation": "left_above_right"}));
}

#[test]
fn selftest_passes() {
    let v = json_of(&["selftest", "--samples", "30", "--seed", "5"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.dot");
    let p = path.to_str().unwrap();
    json_of(&["gl", "prove", "p -> [0]p", "--dot", p]);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("{p"));
    json_of(&["dmap", "build", r#"{"parent": [null, 0, 0]}"#, "--dot", p]);
    assert!(std::fs::read_to_string(&path).unwrap().contains("0: w"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["gl"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["tree", "fork", "many"]).status.code(), Some(2));
    assert_eq!(run(&["gl", "prove", "p ->"]).status.code(), Some(3));
    assert_eq!(run(&["ord", "add", "w+", "1"]).status.code(), Some(3));
    assert_eq!(run(&["space", "classify", "/nonexistent/space.json"]).status.code(), Some(3));
    assert_eq!(run(&["space", "classify", r#"{"points": 2, "opens": [[0]]}"#]).status.code(), Some(3));
    assert_eq!(run(&["icard", "decide", "<0>T & <1>T -> <0>T"]).status.code(), Some(3));
    assert_eq!(run(&["--cap", "2", "space", "classify", FORK2]).status.code(), Some(4));
    let out = run(&["gl", "prove", "<0>T"]);
    assert_eq!(out.status.code(), Some(0));
}
