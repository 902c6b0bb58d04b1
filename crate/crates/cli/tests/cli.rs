//! End-to-end runs of the `valuations` binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn scene(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(name)
}

fn run(args: &[&str]) -> (Value, i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_valuations")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (value, out.status.code().expect("exit code"), text)
}

fn run_scene(name: &str, args: &[&str]) -> (Value, i32, String) {
    let path = scene(name);
    let mut full = vec!["--scene", path.to_str().unwrap()];
    full.extend_from_slice(args);
    run(&full)
}

fn write_scene(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let p = dir.path().join("scene.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn euler_characteristic_is_one() {
    let (v, code, _) = run_scene("interval.json", &["eval", "chi", "K"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], "1");
    assert_eq!(v["schema"], "valuations-report/1");
}

#[test]
fn cube_intrinsic_volumes() {
    let (v, code, _) = run_scene("cube.json", &["intrinsic", "cube"]);
    assert_eq!(code, 0);
    let exact: Vec<&str> =
        v["results"]["intrinsic_volumes"].as_array().unwrap().iter().map(|x| x["exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["1", "3", "3", "1"]);
}

#[test]
fn shipped_scenes_pass_their_checks() {
    for name in ["interval.json", "square.json", "cube.json"] {
        let (v, code, _) = run_scene(name, &["check"]);
        assert_eq!(code, 0, "{name}: {v}");
        assert_eq!(v["results"]["failures"], 0);
        assert!(v["results"]["total"].as_u64().unwrap() > 0);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["--seed", "7", "--mc-samples", "5000", "check"];
    let (_, _, a) = run_scene("square.json", &args);
    let (_, _, b) = run_scene("square.json", &args);
    assert_eq!(a, b);
    let (_, _, c) = run_scene("square.json", &["--seed", "8", "--mc-samples", "5000", "check"]);
    let digest = |s: &str| serde_json::from_str::<Value>(s).unwrap()["inputs_digest"].clone();
    assert_ne!(digest(&a), digest(&c));
}

#[test]
fn text_format_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (_, code, stdout) = run_scene("interval.json", &["--output", out.to_str().unwrap(), "volume", "L"]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["results"]["volume"], "2");
    let (_, code, text) = run_scene("interval.json", &["--format", "text", "volume", "L"]);
    assert_eq!(code, 0);
    assert!(text.contains("volume: 2"), "{text}");
}

#[test]
fn exact_values_survive_a_json_roundtrip() {
    let (v, code, text) = run_scene("square.json", &["scaling-curve", "area", "square", "--point", "1/2,1/3"]);
    assert_eq!(code, 0, "{text}");
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    let coeffs: Vec<&str> =
        v["results"]["coefficients"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["0", "0", "1"]);
    assert_eq!(v["results"]["point"][0], "1/2");
}

#[test]
fn dangling_reference_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scene(&dir, r#"{"dimension": 1, "valuations": {"v": {"terms": [{"density": "F"}]}}}"#);
    let (v, code, _) = run(&["--scene", p.to_str().unwrap(), "check"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["error"]["kind"], "reference");
}

#[test]
fn mixed_dimensions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scene(&dir, r#"{"dimension": 2, "bodies": {"A": [["0", "0"]], "B": [["0", "0", "0"]]}}"#);
    let (v, code, _) = run(&["--scene", p.to_str().unwrap(), "volume", "A"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["error"]["kind"], "dimension");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_scene(&dir, "{\n\"dimension\": 1,\n\"bodies\": {\"K\":\n}");
    let (v, code, _) = run(&["--scene", p.to_str().unwrap(), "check"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["error"]["kind"], "parse");
    assert!(v["results"]["error"]["message"].as_str().unwrap().contains("line 4"));
}

#[test]
fn unknown_body_and_bad_arity() {
    let (v, code, _) = run_scene("cube.json", &["intrinsic", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["results"]["error"]["kind"], "reference");
    let (_, code, _) = run_scene("cube.json", &["mixed-volume", "cube"]);
    assert_eq!(code, 3);
}
