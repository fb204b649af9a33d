use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const MIXED: &str = "vertex 1 a=2 s=1\nvertex 2 a=0 s=1\nedge 1 2 a=-1\nedge 2 1 a=-1\n";

fn qbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbb")).args(args).env_remove("QBB_WORD_CAP").output().expect("run qbb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_nodes(o: &Output) -> usize {
    let v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
    v["nodes"].as_array().unwrap().len()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "ok.txt", MIXED);
    let bad = write(&dir, "bad.txt", "vertex 1 a=2 s=1\nvertex 2 a=2 s=1\nedge 1 2 a=1\nedge 2 1 a=1\n");
    let mal = write(&dir, "mal.txt", "vertex 1 a=2\n");
    assert_eq!(qbb(&["validate", s(&ok)]).status.code(), Some(0));
    let o = qbb(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("a_ij ≤ 0") && err.contains("line 3"), "{}", err);
    assert_eq!(qbb(&["validate", s(&mal)]).status.code(), Some(3));
    assert_eq!(qbb(&["crystal", "binf", s(&bad)]).status.code(), Some(2));
    assert_eq!(qbb(&["validate", "/nonexistent/datum"]).status.code(), Some(3));
    assert_eq!(qbb(&["no-such-command"]).status.code(), Some(3));
}

#[test]
fn crystal_node_counts() {
    let dir = TempDir::new().unwrap();
    let iso = write(&dir, "iso.txt", "vertex 1 a=0 s=1\n");
    let neg = write(&dir, "neg.txt", "vertex 1 a=-2 s=1\n");
    let sl2 = write(&dir, "sl2.txt", "vertex 1 a=2 s=1\n");
    // partitions: 1 + 1 + 2 + 3 + 5
    assert_eq!(json_nodes(&qbb(&["crystal", "binf", s(&iso), "--format", "json"])), 12);
    // compositions: 1 + 1 + 2 + 4
    assert_eq!(json_nodes(&qbb(&["crystal", "binf", s(&neg), "--max-height", "3", "--format", "json"])), 8);
    let o = qbb(&["crystal", "hw", s(&sl2), "--lambda", "1:2", "--format", "dot"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=\"1:1\"]").count(), 2);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 3);
    assert_eq!(qbb(&["crystal", "hw", s(&sl2)]).status.code(), Some(3));
    assert_eq!(qbb(&["crystal", "hw", s(&sl2), "--lambda", "1:-1"]).status.code(), Some(3));
}

#[test]
fn json_graph_parses_back() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "mixed.txt", MIXED);
    let out = stdout(&qbb(&["crystal", "binf", s(&d), "--max-height", "3", "--format", "json"]));
    let doc = qbb::graphio::GraphDoc::parse(&out).unwrap();
    assert_eq!(doc.nodes[0].id, 0);
    assert!(doc.edges.iter().all(|e| e.src < e.dst));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "mixed.txt", MIXED);
    let a = qbb(&["crystal", "binf", s(&d), "--format", "dot"]);
    let b = qbb(&["crystal", "binf", s(&d), "--format", "dot"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn forms_and_radical() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "mixed.txt", MIXED);
    assert_eq!(stdout(&qbb(&["form", s(&d), "b(1,1)", "b(1,1)", "L"])).trim(), "1/(1 - q^2)");
    assert_eq!(stdout(&qbb(&["form", s(&d), "b(1,1)", "b(1,1)", "K"])).trim(), "1");
    assert_eq!(stdout(&qbb(&["form", s(&d), "(1,1)", "(2,1)"])).trim(), "0");
    let serre = "(1,1)(1,1)(2,1) - (q + q^-1)*(1,1)(2,1)(1,1) + (2,1)(1,1)(1,1)";
    assert_eq!(stdout(&qbb(&["radical", s(&d), serre])).trim(), "true");
    assert_eq!(stdout(&qbb(&["radical", s(&d), "(1,1)(2,1)"])).trim(), "false");
    assert_eq!(qbb(&["form", s(&d), "(1,1", "(1,1)"]).status.code(), Some(3));
    assert_eq!(qbb(&["form", s(&d), "(1,2)", "(1,1)"]).status.code(), Some(3));
}

#[test]
fn global_and_caps() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "mixed.txt", MIXED);
    let o = qbb(&["global", s(&d), "0"]);
    assert_eq!(stdout(&o).trim(), "G(#0) [1] = 1");
    let o = qbb(&["global", s(&d), "1"]);
    assert_eq!(stdout(&o).trim(), "G(#1) [f(1,1)] = (1,1)");
    assert_eq!(qbb(&["global", s(&d), "100000"]).status.code(), Some(3));
    assert_eq!(qbb(&["--word-cap", "3", "crystal", "binf", s(&d)]).status.code(), Some(4));
    let capped = Command::new(env!("CARGO_BIN_EXE_qbb"))
        .args(["crystal", "binf", s(&d)])
        .env("QBB_WORD_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(4));
}

#[test]
fn perfect_from_files() {
    use qbb::perfect::{basis_to_json, crystal_limit_data, space_to_json};
    let b = qbb::binf::build_binf(qbb::BorcherdsCartanDatum::mixed(), 3, 5000).unwrap();
    let (space, basis) = crystal_limit_data(&b.graph).unwrap();
    let dir = TempDir::new().unwrap();
    let sp = write(&dir, "space.json", &space_to_json(&space));
    let bs = write(&dir, "basis.json", &basis_to_json(&basis));
    let o = qbb(&["perfect", s(&sp), s(&bs)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("result: perfect\n"));
    assert_eq!(qbb(&["perfect", s(&sp), s(&bs), "--mode", "upper"]).status.code(), Some(3));
    let broken = write(&dir, "broken.json", "{\"vectors\": [");
    assert_eq!(qbb(&["perfect", s(&sp), s(&broken)]).status.code(), Some(3));
}

#[test]
fn verify_suites() {
    let o = qbb(&["verify", "radical"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("[PASS] criterion 3 radical"));
    // known red: printed with its analysis, exit 1
    let o = qbb(&["verify", "global-basis"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("analysis:"));
    assert_eq!(qbb(&["verify", "nonsense"]).status.code(), Some(3));
}
