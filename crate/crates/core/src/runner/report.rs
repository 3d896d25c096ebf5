use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    /// A task precondition was not met, such as a signature on a complex
    /// that is not closed.
    #[serde(rename = "ERROR")]
    Error,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskReport {
    pub task: String,
    pub verdict: Verdict,
    pub summary: String,
    /// Violations, each prefixed with its kind.
    pub witnesses: Vec<String>,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub problem: String,
    /// Tolerance for complex identities; exact checks use none.
    pub tol: f64,
    pub tol_overridden: bool,
    pub seed: u64,
    pub max_subdivisions: usize,
    pub tasks: Vec<TaskReport>,
    pub verdict: Verdict,
}

impl Report {
    /// 0 when every task passed, 1 on any failure, 2 when a task could not run.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }

    pub fn task(&self, name: &str) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.task == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}  problem: {}", self.tool, self.version, self.problem);
        let _ = writeln!(
            out,
            "tol {:e}{}  seed {}  max subdivisions {}",
            self.tol,
            if self.tol_overridden { " (override)" } else { "" },
            self.seed,
            self.max_subdivisions
        );
        for t in &self.tasks {
            let _ = writeln!(out, "[{}] {}: {}", t.verdict.label(), t.task, t.summary);
            for w in &t.witnesses {
                let _ = writeln!(out, "    witness: {w}");
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        out
    }
}
