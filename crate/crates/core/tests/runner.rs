use equisign::runner::{run_text, Options, RunError, Verdict};
use serde_json::json;

fn disk(tasks: &[&str]) -> String {
    json!({
        "name": "disk",
        "group": {"name": "Z1", "table": [[0]]},
        "complex": {"vertices": 3, "facets": [[0, 1, 2]]},
        "reps": {},
        "tasks": tasks
    })
    .to_string()
}

#[test]
fn signature_of_a_manifold_with_boundary_is_an_error_verdict() {
    let report = run_text(&disk(&["validate", "signature"]), &Options::default()).unwrap();
    assert_eq!(report.task("validate").unwrap().verdict, Verdict::Pass);
    assert_eq!(report.task("signature").unwrap().verdict, Verdict::Error);
    assert_eq!(report.verdict, Verdict::Error);
    assert_eq!(report.exit_code(), 2);
}

#[test]
fn unknown_task_names_its_index() {
    let err = run_text(&disk(&["validate", "frobnicate"]), &Options::default()).unwrap_err();
    assert!(matches!(&err, RunError::Parse { field, .. } if field == "tasks[1]"), "{err}");
}

#[test]
fn bundle_tasks_without_a_bundle_are_rejected() {
    let err = run_text(&disk(&["cocycle"]), &Options::default()).unwrap_err();
    assert!(matches!(&err, RunError::Parse { field, .. } if field == "tasks[0]"), "{err}");
}

#[test]
fn non_permutation_action_is_rejected() {
    let spec = json!({
        "name": "bad action",
        "group": {"name": "Z2", "table": [[0, 1], [1, 0]]},
        "complex": {"vertices": 3, "facets": [[0, 1, 2]], "action": {"elements": [[0, 1, 2], [0, 0, 2]]}},
        "reps": {},
        "tasks": ["validate"]
    });
    assert!(run_text(&spec.to_string(), &Options::default()).is_err());
}

#[test]
fn tasks_run_in_canonical_order_once() {
    let report = run_text(&disk(&["stratify,validate", "validate"]), &Options::default()).unwrap();
    let names: Vec<&str> = report.tasks.iter().map(|t| t.task.as_str()).collect();
    assert_eq!(names, ["validate", "stratify"]);
}
