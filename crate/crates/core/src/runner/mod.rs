//! Batch execution of problem descriptions.
//!
//! A problem is parsed from JSON, every block is validated, and the
//! requested tasks run in a fixed dependency order. The result is a
//! [`Report`] whose JSON form is byte-identical across runs.

mod report;
pub mod spec;
mod tasks;

use std::fmt;

use thiserror::Error;

pub use report::{Report, TaskReport, Verdict};
pub use spec::{resolve, Problem, ProblemSpec};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RunError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },
    #[error("validation error in `{block}`: {message}")]
    Validation { block: String, message: String },
    #[error("unknown fixture `{name}`")]
    UnknownFixture { name: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl RunError {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        RunError::Parse {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn validation(block: impl Into<String>, message: impl fmt::Display) -> Self {
        RunError::Validation {
            block: block.into(),
            message: message.to_string(),
        }
    }
}

/// Tasks in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Task {
    Validate,
    Stratify,
    Apc,
    Signature,
    GSignature,
    Transfer,
    Projectivity,
    Subdivision,
    Model,
    Atlas,
    Cocycle,
    RoundTrip,
    Split,
    Classification,
}

impl Task {
    pub const ALL: [Task; 14] = [
        Task::Validate,
        Task::Stratify,
        Task::Apc,
        Task::Signature,
        Task::GSignature,
        Task::Transfer,
        Task::Projectivity,
        Task::Subdivision,
        Task::Model,
        Task::Atlas,
        Task::Cocycle,
        Task::RoundTrip,
        Task::Split,
        Task::Classification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Validate => "validate",
            Task::Stratify => "stratify",
            Task::Apc => "apc",
            Task::Signature => "signature",
            Task::GSignature => "g_signature",
            Task::Transfer => "transfer",
            Task::Projectivity => "projectivity",
            Task::Subdivision => "subdivision",
            Task::Model => "model",
            Task::Atlas => "atlas",
            Task::Cocycle => "cocycle",
            Task::RoundTrip => "round_trip",
            Task::Split => "split",
            Task::Classification => "classification",
        }
    }

    pub fn parse(name: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == name.trim())
    }

    pub(crate) fn needs_complex(self) -> bool {
        (Task::Stratify..=Task::Subdivision).contains(&self)
    }

    pub(crate) fn needs_model(self) -> bool {
        self == Task::Model
    }

    pub(crate) fn needs_bundle(self) -> bool {
        self >= Task::Atlas
    }
}

/// Run-time settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// Overrides the tolerance of every representation.
    pub tol: Option<f64>,
    pub seed: u64,
    pub max_subdivisions: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: None,
            seed: 0,
            max_subdivisions: 2,
        }
    }
}

/// Parse a problem description, reporting the path of the offending field.
pub fn parse_spec(text: &str) -> Result<ProblemSpec, RunError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() || path == "." {
            RunError::Syntax {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        } else {
            RunError::Parse { field: path, message: inner.to_string() }
        }
    })
}

/// Resolve and run a problem.
pub fn run(spec: &ProblemSpec, options: &Options) -> Result<Report, RunError> {
    let problem = resolve(spec, options.tol)?;
    Ok(tasks::execute(&problem, options))
}

/// Parse and run problem text.
pub fn run_text(text: &str, options: &Options) -> Result<Report, RunError> {
    run(&parse_spec(text)?, options)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tasks_sort_into_execution_order() {
        let mut ts = vec![Task::Cocycle, Task::Signature, Task::Validate, Task::Apc];
        ts.sort();
        assert_eq!(ts, vec![Task::Validate, Task::Apc, Task::Signature, Task::Cocycle]);
        assert!(Task::ALL.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_spec("{\n  \"name\": \"x\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, RunError::Syntax { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn wrong_field_type_names_the_field() {
        let err = parse_spec(r#"{"name": "x", "group": {"table": 3}, "tasks": []}"#).unwrap_err();
        match err {
            RunError::Parse { field, .. } => assert_eq!(field, "group.table"),
            other => panic!("{other:?}"),
        }
    }
}
