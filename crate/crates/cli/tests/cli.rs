//! End-to-end CLI tests: exit codes, output determinism, manifest errors.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paraverify"))
}

fn write_manifest(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

const BROKEN: &str = r#"{
    "name": "broken",
    "kind": "paracontact",
    "chart": {"coords": ["x","y","z"], "sample_bounds": [[-1,1],[-1,1],[-1,1]]},
    "presentation": {"coordinate": {
        "phi": [["0","0","0"],["0","0","0"],["0","0","0"]],
        "xi": ["1","0","0"],
        "eta": ["1","0","0"],
        "g": [["1","0","0"],["0","-1","0"],["0","0","1"]]
    }}
}"#;

#[test]
fn corpus_run_passes_with_exit_zero() {
    let out = bin()
        .args(["corpus", "run", "example42", "--points", "20"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0 failed"), "{text}");
}

#[test]
fn validate_broken_structure_exits_one() {
    let f = write_manifest(BROKEN);
    let out = bin()
        .args(["validate", f.path().to_str().unwrap(), "--points", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL"), "{text}");
}

#[test]
fn malformed_manifest_exits_two() {
    let f = write_manifest("{ not json");
    let out = bin()
        .args(["validate", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let missing = bin().args(["suite", "/nonexistent.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let unknown = bin().args(["corpus", "run", "nope"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let run = || {
        bin()
            .args([
                "corpus", "run", "example42", "--points", "25", "--format", "json",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn corpus_list_names_entries() {
    let out = bin().args(["corpus", "list"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    for name in [
        "example41",
        "example42",
        "example43",
        "example43-bridge",
        "zetamu-plus-1",
        "typei-nu",
    ] {
        assert!(text.contains(name), "missing {name} in {text}");
    }
}

#[test]
fn classify_at_point_reports_type() {
    let f = write_manifest(include_str!("../../core/manifests/example41.json"));
    let out = bin()
        .args([
            "classify",
            f.path().to_str().unwrap(),
            "--point",
            "0.1,0.5,2.0",
            "--points",
            "20",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("type I"), "{text}");
    assert!(text.contains("lambda = 2.0000"), "{text}");
}

#[test]
fn deform_verb_checks_transform() {
    let f = write_manifest(include_str!("../../core/manifests/example42.json"));
    let out = bin()
        .args([
            "deform",
            f.path().to_str().unwrap(),
            "--alpha",
            "2",
            "--points",
            "15",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("kmn-transform"), "{text}");
    assert!(text.contains("0 failed"), "{text}");
}

#[test]
fn model_zetamu_runs_and_emits() {
    let out = bin()
        .args([
            "model", "zetamu", "--branch", "minus", "--nu", "1", "--points", "15",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("zetamu-branch"), "{text}");
    let out = bin()
        .args([
            "model",
            "zetamu",
            "--branch",
            "plus",
            "--nu",
            "1",
            "--emit-manifest",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"zetamu\""), "{text}");
}
