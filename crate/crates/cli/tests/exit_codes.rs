use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_phiterate"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn successful_run_exits_zero_with_envelope() {
    let out = run(&["polygon", "--poly", "[-3,9,6,1]"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["inputEcho"]["subcommand"], "polygon");
    assert_eq!(v["result"]["eisenstein"], true);
    assert!(v["timingMs"].is_null());
}

#[test]
fn malformed_json_is_a_schema_error() {
    let out = run(&["ltgroup", "--json", "-"], Some("{not json"));
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "SchemaError");
}

#[test]
fn composite_prime_is_rejected() {
    let out = run(&["polygon", "--p", "4", "--poly", "[1,1]"], None);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "CompositeP");
}

#[test]
fn unknown_flag_exits_three() {
    let out = run(&["cheb", "--bogus"], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_compatible_sequence_is_rejected() {
    let input = r#"{"tower": {"ring": {"p": "3", "modulus": ["0", "1"], "precision": 8},
        "P": ["0", "9", "6", "1"], "u0": "6558"}, "elements": [["2"], ["2"], ["2"]]}"#;
    let out = run(&["coleman", "--json", "-", "--pi-precision", "2"], Some(input));
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["code"], "NotNormCompatible");
}
