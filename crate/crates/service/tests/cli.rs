mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn espace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_espace")).args(args).env_remove("ES_SNAPSHOT_DIR").output().expect("run espace")
}

fn ok(out: Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn ingest_is_byte_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let config = common::repo_root().join("config/example.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let out_a = ok(espace(&["ingest", "--config", config.to_str().unwrap(), "--out", a.to_str().unwrap()]));
    let out_b = ok(espace(&["ingest", "--config", config.to_str().unwrap(), "--out", b.to_str().unwrap()]));
    assert_eq!(out_a.replace(a.to_str().unwrap(), ""), out_b.replace(b.to_str().unwrap(), ""));
    assert!(out_a.contains("documents: 3"));
    let (fa, fb) = (files(&a), files(&b));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["alignment.jsonl", "centrality.jsonl", "config.json", "graph.jsonl", "snapshot.json", "taxonomy.jsonl"]);
    assert_eq!(fa, fb);
}

#[test]
fn overview_and_annotate_commands() {
    let tmp = tempfile::tempdir().unwrap();
    let snap = tmp.path().join("snap");
    let manifest = common::toy_manifest();
    ok(espace(&["ingest", "--manifest", manifest.to_str().unwrap(), "--out", snap.to_str().unwrap()]));

    let first = ok(espace(&["overview", "--snapshot", snap.to_str().unwrap(), "ns:loan_application"]));
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["concept_uri"], "ns:loan_application");
    assert!(snap.join("cache/embeddings.jsonl").is_file());
    let second = ok(espace(&["overview", "--snapshot", snap.to_str().unwrap(), "ns:loan_application"]));
    assert_eq!(first, second);

    let out = ok(espace(&["annotate", "--snapshot", snap.to_str().unwrap(), "--html", "the credit score"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["annotations"][0]["concept_uri"], "ns:credit_score");
    assert!(v["html"].as_str().unwrap().contains("es-annotation"));

    // re-ingesting keeps the embedding cache
    ok(espace(&["ingest", "--manifest", manifest.to_str().unwrap(), "--out", snap.to_str().unwrap()]));
    assert!(snap.join("cache/embeddings.jsonl").is_file());
}

#[test]
fn errors_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = espace(&["ingest", "--out", tmp.path().join("x").to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no manifest"));

    let out = espace(&["overview", "--snapshot", tmp.path().to_str().unwrap(), "ns:bank"]);
    assert!(!out.status.success());

    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "nonsense_key = 1\n").unwrap();
    let out = espace(&["ingest", "--config", bad.to_str().unwrap(), "--out", tmp.path().join("y").to_str().unwrap()]);
    assert!(!out.status.success());
}
