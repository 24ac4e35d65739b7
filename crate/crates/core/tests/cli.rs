use std::process::{Command, Output};

use serde_json::Value;

fn kloos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kloos"))
        .args(args)
        .env_remove("KLOOS_JOBS")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = kloos(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn moments_json() {
    let v = json(&["moments", "--r", "1", "--hmax", "4", "--format", "json"]);
    assert_eq!(v["q"], 3);
    assert_eq!(v["SK"], serde_json::json!([-1, 1, -1, 1]));
}

#[test]
fn large_moments_are_exact_numbers() {
    let v = json(&["moments", "--r", "3", "--hmax", "10", "--format", "json"]);
    assert_eq!(v["SK"][9].to_string(), "1953610177");
    assert_eq!(v["MK"][9].to_string(), "15177987521");
}

#[test]
fn constants_csv() {
    let out = kloos(&["constants", "--r", "1", "--family", "DC3+", "--n", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,q,A,B,N"));
    assert_eq!(lines.next(), Some("DC3+,2,3,36,2,72"));
}

#[test]
fn constants_json() {
    let v = json(&["constants", "--r", "1", "--family", "DC3+", "--n", "2", "--format", "json"]);
    let s = v.to_string();
    assert!(s.contains("\"A\":36") && s.contains("\"B\":2") && s.contains("\"N\":72"), "{s}");
}

#[test]
fn verify_passes() {
    let out = kloos(&["verify", "--r", "1", "--nmax", "2", "--hmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&["verify", "--r", "1", "--nmax", "2", "--hmax", "8", "--format", "json"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn weights_json() {
    let v = json(&["weights", "--family", "DC1-", "--n", "1", "--jmax", "4", "--format", "json"]);
    assert_eq!(v["C_prefix"], serde_json::json!([1, 4, 6, 8, 8]));
    assert_eq!(v["injective"], true);
}

#[test]
fn other_subcommands_run() {
    for args in [
        &["field", "--r", "2"][..],
        &["kloosterman", "--r", "2", "--format", "csv"],
        &["recursion", "--family", "DC2+", "--n", "2", "--hmax", "4"],
        &["histogram", "--family", "DC3+", "--n", "2"],
        &["field", "--r", "2", "--modulus", "2,2,1", "--format", "json"],
    ] {
        let out = kloos(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["constants", "--family", "DC1+", "--n", "3"][..],
        &["field", "--r", "0"],
        &["field", "--r", "2", "--modulus", "2,0,1"],
        &["weights", "--family", "DC9+", "--n", "1"],
        &["recursion", "--family", "DC1-", "--n", "1", "--hmax", "11"],
        &["nonsense"],
    ] {
        let out = kloos(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("kloos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    let p = path.to_str().unwrap();
    let out = kloos(&["moments", "--hmax", "3", "--format", "json", "--output", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["SK"], serde_json::json!([-1, 1, -1]));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["verify", "--r", "2", "--nmax", "3", "--hmax", "4", "--format", "json"];
    let one = kloos(&[&["--jobs", "1"][..], &args[..]].concat());
    let four = Command::new(env!("CARGO_BIN_EXE_kloos"))
        .args(args)
        .env("KLOOS_JOBS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}
