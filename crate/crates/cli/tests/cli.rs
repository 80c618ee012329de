use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn jicert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jicert")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let s4 = fixture("s4_s3.json");
    let s4 = s4.to_str().unwrap();
    assert_eq!(code(&jicert(&["check", s4, "--wilson", "--star", "--thmb"])), 0);

    let cyclic = fixture("cyclic_tower.json");
    let out = jicert(&["check", cyclic.to_str().unwrap(), "--wilson"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("overall: FAIL"));

    // stage 1 (order 24) is above the bound, so its star check cannot pass cleanly
    assert_eq!(code(&jicert(&["check", s4, "--star", "--subgroup-bound", "10"])), 3);

    let missing = jicert(&["check", "/nonexistent/prefix.json"]);
    assert_eq!(code(&missing), 2);
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"stages\": [{\"degree\": 3, \"generators\": [[0, 0, 1]]}]}").unwrap();
    let out = jicert(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn json_report_matches_the_text_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = jicert(&[
        "check",
        fixture("cyclic_tower.json").to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["tool"], "jicert");
    assert_eq!(report["summary"]["overall"], "fail");
    assert_eq!(report["stages"].as_array().unwrap().len(), 4);
    assert_eq!(report["stages"][3]["info"]["order"], "16");
}

#[test]
fn build_wreath_writes_a_checkable_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tower.json");
    let out = jicert(&["build-wreath", "C2@3", "-o", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("orders [2, 8, 128]"), "{}", stdout(&out));
    let out = jicert(&["lattice", file.to_str().unwrap(), "--stage", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("normal subgroups"));
    assert!(text.contains("critical pairs"));
    assert!(text.contains("chief factors"));
}

#[test]
fn lattice_of_s4() {
    let out = jicert(&["lattice", fixture("s4_s3.json").to_str().unwrap(), "--stage", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("normal subgroups (4):"), "{text}");
    assert!(text.contains("critical pairs (3):"), "{text}");
    let out = jicert(&["lattice", fixture("s4_s3.json").to_str().unwrap(), "--stage", "5"]);
    assert_eq!(code(&out), 2);
}
