use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn frontmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frontmap")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Path) -> Output {
    let corpus = fixture("papers_60.jsonl");
    let vocab = fixture("vocab_mesh_like.json");
    frontmap(&["report", "--corpus", path(&corpus), "--vocab", path(&vocab), "--out", path(out)])
}

#[test]
fn report_then_verify_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let first = report(&out);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(summary["clusters"], 3);
    let verified = frontmap(&["verify", "--out", path(&out)]);
    assert_eq!(code(&verified), 0, "{}", String::from_utf8_lossy(&verified.stderr));
}

#[test]
fn tampered_run_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert_eq!(code(&report(&out)), 0);
    fs::write(out.join("clusters.csv"), "index,size\n").unwrap();
    let verified = frontmap(&["verify", "--out", path(&out)]);
    assert_eq!(code(&verified), 4);
    assert!(String::from_utf8_lossy(&verified.stderr).contains("clusters.csv"));
}

#[test]
fn invalid_input_exits_two() {
    let corpus = fixture("papers_60.jsonl");
    let bad_fraction = frontmap(&["select", "--corpus", path(&corpus), "--fraction", "1.5"]);
    assert_eq!(code(&bad_fraction), 2);
    let patents = fixture("patents_102.jsonl");
    let wrong_kind = frontmap(&["cluster", "--corpus", path(&patents), "--kind", "paper"]);
    assert_eq!(code(&wrong_kind), 2);
    let dense_on_papers = frontmap(&["dense", "--corpus", path(&corpus)]);
    assert_eq!(code(&dense_on_papers), 2);
}

#[test]
fn missing_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.jsonl");
    assert_eq!(code(&frontmap(&["ingest", "--corpus", path(&missing)])), 3);
    assert_eq!(code(&frontmap(&["verify", "--out", path(dir.path())])), 3);
}

#[test]
fn held_lock_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    fs::create_dir_all(&out).unwrap();
    fs::write(out.join(".frontmap.lock"), "").unwrap();
    assert_eq!(code(&report(&out)), 3);
}

#[test]
fn partial_subcommands_print_json() {
    let patents = fixture("patents_102.jsonl");
    let select = frontmap(&["select", "--corpus", path(&patents), "--kind", "patent"]);
    assert_eq!(code(&select), 0);
    let v: serde_json::Value = serde_json::from_slice(&select.stdout).unwrap();
    assert_eq!(v["selection"]["n_selected"], 21);

    let dense = frontmap(&["dense", "--corpus", path(&patents), "--kind", "patent"]);
    assert_eq!(code(&dense), 0, "{}", String::from_utf8_lossy(&dense.stderr));
    let v: serde_json::Value = serde_json::from_slice(&dense.stdout).unwrap();
    assert_eq!(v["regions"][0]["region"]["members"].as_array().unwrap().len(), 4);
}

#[test]
fn export_writes_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixture("papers_60.jsonl");
    let out = frontmap(&["export", "--corpus", path(&corpus), "--out", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(dir.path().join("network.graphml")).unwrap().contains("<graphml"));
    assert!(fs::read_to_string(dir.path().join("network.dot")).unwrap().starts_with("digraph"));
}
