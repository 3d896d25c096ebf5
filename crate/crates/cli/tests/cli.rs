use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn equisign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equisign")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_spec(name: &str, spec: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("equisign-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, spec).unwrap();
    path
}

fn emit_to_file(fixture: &str) -> PathBuf {
    let out = equisign(&["catalog", "emit", fixture]);
    assert!(out.status.success(), "{}", stderr(&out));
    write_spec(&format!("{fixture}.json"), &stdout(&out))
}

fn tetra_boundary(tasks: &str) -> String {
    json!({
        "name": "tetra",
        "group": {"name": "trivial", "table": [[0]]},
        "complex": {
            "vertices": 4,
            "facets": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
        },
        "reps": {},
        "tasks": [tasks]
    })
    .to_string()
}

#[test]
fn trivial_sphere_signature_is_zero() {
    let path = write_spec("tetra.json", &tetra_boundary("signature"));
    let out = equisign(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sig = &report["tasks"][0]["details"];
    assert_eq!(report["verdict"], "PASS");
    assert_eq!(sig["value"], 0);
    assert_eq!((sig["positive"].clone(), sig["negative"].clone(), sig["null"].clone()), (json!(0), json!(0), json!(0)));
}

#[test]
fn cp2_reports_apc_and_signature_one() {
    let emitted: Value = serde_json::from_str(&stdout(&equisign(&["catalog", "emit", "cp2_9"]))).unwrap();
    let mut spec = emitted.clone();
    spec["tasks"] = json!(["apc,signature"]);
    let path = write_spec("cp2_apc.json", &spec.to_string());
    let out = equisign(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("[PASS] apc:"), "{text}");
    assert!(text.contains("[PASS] signature: (1,0,0), signature 1"), "{text}");
}

#[test]
fn undefined_rep_is_a_parse_error_naming_the_field() {
    let spec = json!({
        "name": "bad",
        "group": {"name": "Z2", "table": [[0, 1], [1, 0]]},
        "reps": {},
        "model": {"subgroup": [0], "rep": "missing", "f_dim": 1},
        "tasks": ["model"]
    });
    let path = write_spec("bad_rep.json", &spec.to_string());
    let out = equisign(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("ParseError"), "{err}");
    assert!(err.contains("model.rep"), "{err}");
}

#[test]
fn malformed_json_reports_its_line() {
    let path = write_spec("syntax.json", "{\n  \"name\": \"x\",\n  \"group\": ]\n}\n");
    let out = equisign(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("ParseError") && err.contains("line 3"), "{err}");
}

#[test]
fn missing_file_is_an_io_error() {
    let out = equisign(&["run", "/nonexistent/problem.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("IoError"));
}

#[test]
fn catalog_lists_at_least_twelve_fixtures() {
    let out = equisign(&["catalog", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().count() >= 12, "{text}");
    assert!(text.lines().any(|l| l.starts_with("cp2_9")));
}

#[test]
fn emitted_cp2_has_signature_one() {
    let path = emit_to_file("cp2_9");
    let out = equisign(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sig = report["tasks"].as_array().unwrap().iter().find(|t| t["task"] == "signature").unwrap();
    assert_eq!(sig["details"]["value"], 1);
}

#[test]
fn emitted_quaternion_model_passes() {
    let path = emit_to_file("q8_center_model");
    let out = equisign(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("verdict: PASS\n"));
}

#[test]
fn mutations_exit_one_with_named_witnesses() {
    for (fixture, witness) in [("broken_cocycle", "CocycleFails"), ("two_arc_atlas", "AmbiguousOverlap")] {
        let path = emit_to_file(fixture);
        let out = equisign(&["run", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{fixture}");
        assert!(stdout(&out).contains(&format!("witness: {witness}")), "{}", stdout(&out));
    }
}

#[test]
fn unknown_fixture_exits_two() {
    let out = equisign(&["catalog", "emit", "no_such_fixture"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("UnknownFixture"));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let path = emit_to_file("s3_hexagon_split");
    let first = equisign(&["run", path.to_str().unwrap(), "--json", "--seed", "7"]);
    let second = equisign(&["run", path.to_str().unwrap(), "--json", "--seed", "7"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn output_flag_writes_the_report_and_records_overrides() {
    let path = emit_to_file("torus7");
    let target = path.with_file_name("torus7.report.json");
    let out = equisign(&["run", path.to_str().unwrap(), "--json", "--tol", "1e-7", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["tol"], 1e-7);
    assert_eq!(report["tol_overridden"], true);
}
