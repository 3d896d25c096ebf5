//! One function per task. Each returns a [`TaskReport`]; a task whose
//! precondition is unmet reports [`Verdict::Error`] instead of failing.

use std::cell::OnceCell;

use serde::Serialize;
use serde_json::{json, Value};

use super::report::{Report, TaskReport, Verdict};
use super::spec::{matrix_to_json, Problem};
use super::{Options, Task};
use crate::apc::{
    build_apc, chains, fundamental_cycle, g_signature, permutation_module_check, quotient_signature, signature,
    subdivision_check, transfer, Apc, ApcError,
};
use crate::bundles::{
    bundle_isomorphism, check_cocycle, check_principal, classification_pairing, from_principal, projected_cocycle,
    to_principal, validate_atlas, NonNormalBundle,
};
use crate::catalog::check_model;
use crate::complex::{stratify, GComplex};
use crate::exactmath::DEFAULT_TOL;

struct Context<'a> {
    problem: &'a Problem,
    options: &'a Options,
    tol: f64,
    apc: OnceCell<Result<Apc, ApcError>>,
}

pub(super) fn execute(problem: &Problem, options: &Options) -> Report {
    let tol = options.tol.unwrap_or(DEFAULT_TOL);
    let cx = Context {
        problem,
        options,
        tol,
        apc: OnceCell::new(),
    };
    let tasks: Vec<TaskReport> = problem.tasks.iter().map(|&t| cx.run(t)).collect();
    let verdict = tasks.iter().map(|t| t.verdict).max().unwrap_or(Verdict::Pass);
    Report {
        tool: "equisign".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        problem: problem.name.clone(),
        tol,
        tol_overridden: options.tol.is_some(),
        seed: options.seed,
        max_subdivisions: options.max_subdivisions,
        tasks,
        verdict,
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

/// `Kind: message` for a violation enum tagged with `kind`.
fn witness<V: Serialize + std::fmt::Display>(v: &V) -> String {
    match to_value(v).get("kind").and_then(Value::as_str) {
        Some(kind) => format!("{kind}: {v}"),
        None => v.to_string(),
    }
}

fn report(task: Task, ok: bool, summary: impl Into<String>, witnesses: Vec<String>, details: Value) -> TaskReport {
    TaskReport {
        task: task.name().to_string(),
        verdict: Verdict::from_bool(ok),
        summary: summary.into(),
        witnesses,
        details,
    }
}

fn error(task: Task, message: impl std::fmt::Display) -> TaskReport {
    TaskReport {
        task: task.name().to_string(),
        verdict: Verdict::Error,
        summary: message.to_string(),
        witnesses: Vec::new(),
        details: Value::Null,
    }
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "all checks hold"
    } else {
        "checks fail"
    }
}

/// The complex with a coherent orientation attached when it has none and
/// one exists.
fn oriented(c: &GComplex) -> GComplex {
    if c.orientation().is_some() {
        return c.clone();
    }
    match fundamental_cycle(c) {
        Ok(signs) => c.clone().with_orientation(signs).unwrap_or_else(|_| c.clone()),
        Err(_) => c.clone(),
    }
}

impl Context<'_> {
    fn complex(&self) -> &GComplex {
        self.problem.complex.as_ref().expect("checked at resolution")
    }

    fn bundle(&self) -> &NonNormalBundle {
        self.problem.bundle.as_ref().expect("checked at resolution")
    }

    fn regular(&self) -> Result<(GComplex, usize), String> {
        oriented(self.complex())
            .regularize(self.options.max_subdivisions)
            .map_err(|e| e.to_string())
    }

    fn apc(&self) -> Result<&Apc, &ApcError> {
        self.apc.get_or_init(|| build_apc(self.complex())).as_ref()
    }

    fn run(&self, task: Task) -> TaskReport {
        match task {
            Task::Validate => self.validate(),
            Task::Stratify => self.stratify(),
            Task::Apc => self.apc_task(),
            Task::Signature => self.signature(),
            Task::GSignature => self.g_signature(),
            Task::Transfer => self.transfer(),
            Task::Projectivity => self.projectivity(),
            Task::Subdivision => self.subdivision(),
            Task::Model => self.model(),
            Task::Atlas => self.atlas(),
            Task::Cocycle => self.cocycle(),
            Task::RoundTrip => self.round_trip(),
            Task::Split => self.split(),
            Task::Classification => self.classification(),
        }
    }

    fn validate(&self) -> TaskReport {
        let p = self.problem;
        let mut ok = true;
        let mut witnesses = Vec::new();
        let mut details = json!({ "group_order": p.group.order() });
        if let Some(c) = &p.complex {
            let action = c.validate_action();
            ok &= action.passed();
            witnesses.extend(action.violations.iter().map(|v| format!("{v:?}")));
            details["complex"] = json!({
                "f_vector": c.complex().f_vector(),
                "oriented": c.orientation().is_some(),
                "regular": c.is_regular(),
                "action": to_value(&action),
            });
        }
        if let Some(m) = &p.model {
            let nn = m.nonnormal.verify();
            ok &= nn.passed(self.tol);
            let mut model = json!({
                "normal": m.canonical.is_some(),
                "rep": m.rho.name(),
                "rep_dim": m.rho.dim(),
                "f_dim": m.f_dim,
                "orbit_model": to_value(&nn),
            });
            if let Some(canonical) = &m.canonical {
                let action = canonical.verify_action();
                ok &= action.passed();
                witnesses.extend(action.violations.iter().map(|v| format!("{v}")));
                model["action"] = to_value(&action);
            }
            details["model"] = model;
        }
        if let Some(b) = &p.bundle {
            details["bundle"] = json!({
                "components": b.components().len(),
                "charts": b.components()[0].atlas().chart_count(),
            });
        }
        report(Task::Validate, ok, format!("inputs validate: {}", pass_word(ok)), witnesses, details)
    }

    fn stratify(&self) -> TaskReport {
        let (c, rounds) = match self.regular() {
            Ok(x) => x,
            Err(e) => return error(Task::Stratify, e),
        };
        let s = match stratify(&c) {
            Ok(s) => s,
            Err(e) => return error(Task::Stratify, e),
        };
        let ok = s.checks.passed();
        let details = json!({
            "subdivisions": rounds,
            "family": s.family.iter().map(|h| h.elements().to_vec()).collect::<Vec<_>>(),
            "layers": s.layers.iter().map(Vec::len).collect::<Vec<_>>(),
            "fixed_f_vectors": s.fixed_sets.iter().map(|x| x.f_vector()).collect::<Vec<_>>(),
            "stratum_f_vectors": s.strata.iter().map(|x| x.f_vector()).collect::<Vec<_>>(),
            "free_f_vector": s.free_stratum.f_vector(),
            "checks": to_value(&s.checks),
        });
        let summary = format!("{} nontrivial isotropy groups after {rounds} subdivisions", s.family.len());
        report(Task::Stratify, ok, summary, Vec::new(), details)
    }

    fn apc_task(&self) -> TaskReport {
        let apc = match self.apc() {
            Ok(a) => a,
            Err(e) => return error(Task::Apc, e),
        };
        let r = apc.report();
        let witnesses = r
            .first_failure()
            .map(|(p, k)| vec![format!("PropertyFailure: property ({p}) fails in degree {k}")])
            .unwrap_or_default();
        let summary = format!("duality maps in dimension {}: {}", apc.dim(), pass_word(r.passed()));
        report(Task::Apc, r.passed(), summary, witnesses, to_value(r))
    }

    fn signature(&self) -> TaskReport {
        let triple = match self.apc().map_err(Clone::clone).and_then(signature) {
            Ok(t) => t,
            Err(e) => return error(Task::Signature, e),
        };
        let summary = format!(
            "({},{},{}), signature {}",
            triple.positive,
            triple.negative,
            triple.null,
            triple.value()
        );
        let mut details = to_value(&triple);
        details["value"] = json!(triple.value());
        report(Task::Signature, true, summary, Vec::new(), details)
    }

    fn g_signature(&self) -> TaskReport {
        let g = match self.apc().map_err(Clone::clone).and_then(g_signature) {
            Ok(g) => g,
            Err(e) => return error(Task::GSignature, e),
        };
        let parts: Vec<String> = g.per_irrep.iter().map(|r| format!("{}: {}", r.name, r.signature.value())).collect();
        let summary = format!("total {}; {}", g.total.value(), parts.join(", "));
        report(Task::GSignature, g.passed(), summary, Vec::new(), to_value(&g))
    }

    fn transfer(&self) -> TaskReport {
        let (c, _) = match self.regular() {
            Ok(x) => x,
            Err(e) => return error(Task::Transfer, e),
        };
        let preserving = c.orientation().is_some() && c.orientation_reversing_element().is_none();
        if preserving {
            return match quotient_signature(&c) {
                Ok(q) => {
                    let summary = format!("quotient Betti {:?}, signature {}", q.betti, q.signature.value());
                    let witnesses = failed_degrees(&q.transfer);
                    report(Task::Transfer, q.passed(), summary, witnesses, to_value(&q))
                }
                Err(ApcError::DualityFailure { degree }) => report(
                    Task::Transfer,
                    false,
                    "quotient duality fails",
                    vec![format!("DualityFailure: degree {degree}")],
                    Value::Null,
                ),
                Err(e) => error(Task::Transfer, e),
            };
        }
        match transfer(&c) {
            Ok(t) => {
                let ok = t.iter().all(|d| d.holds);
                let betti: Vec<usize> = t.iter().map(|d| d.quotient_betti).collect();
                let summary = format!("quotient Betti {betti:?}; duality not checked, the action does not preserve an orientation");
                let details = json!({ "betti": betti, "transfer": to_value(&t), "duality": Value::Null });
                report(Task::Transfer, ok, summary, failed_degrees(&t), details)
            }
            Err(e) => error(Task::Transfer, e),
        }
    }

    fn projectivity(&self) -> TaskReport {
        let c = self.complex();
        let r = permutation_module_check(&chains(c), c);
        let summary = format!("chain characters against orbit census in {} degrees: {}", r.degrees.len(), pass_word(r.passed()));
        report(Task::Projectivity, r.passed(), summary, Vec::new(), to_value(&r))
    }

    fn subdivision(&self) -> TaskReport {
        let (c, rounds) = match self.regular() {
            Ok(x) => x,
            Err(e) => return error(Task::Subdivision, e),
        };
        match subdivision_check(&c) {
            Ok(r) => {
                let summary = format!("after {rounds} regularizing subdivisions, one more: {}", pass_word(r.passed()));
                let mut details = to_value(&r);
                details["regularizing_subdivisions"] = json!(rounds);
                report(Task::Subdivision, r.passed(), summary, Vec::new(), details)
            }
            Err(e) => error(Task::Subdivision, e),
        }
    }

    fn model(&self) -> TaskReport {
        let m = self.problem.model.as_ref().expect("checked at resolution");
        let first = &m.nonnormal.components()[0].model;
        let check = match check_model(m.canonical.as_ref().unwrap_or(first), self.options.seed) {
            Ok(c) => c,
            Err(e) => return error(Task::Model, e),
        };
        let orbit = m.nonnormal.verify();
        let ok = check.passed() && orbit.passed(self.tol);
        let witnesses = check.action_violations.iter().map(|v| v.to_string()).collect();
        let summary = format!(
            "{} cosets, {} triples; lifts {}",
            check.cosets,
            check.triples_checked,
            if check.surjective { "surjective" } else { "not surjective" }
        );
        let details = json!({ "canonical": to_value(&check), "orbit_model": to_value(&orbit) });
        report(Task::Model, ok, summary, witnesses, details)
    }

    fn atlas(&self) -> TaskReport {
        let reports: Vec<_> = self.bundle().components().iter().map(|b| validate_atlas(b.atlas())).collect();
        let ok = reports.iter().all(|r| r.passed());
        let witnesses = reports.iter().flat_map(|r| r.violations.iter().map(witness)).collect();
        let summary = format!("{} charts per component: {}", reports[0].charts, pass_word(ok));
        report(Task::Atlas, ok, summary, witnesses, to_value(&reports))
    }

    fn cocycle(&self) -> TaskReport {
        let reports: Vec<_> = self.bundle().components().iter().map(check_cocycle).collect();
        let ok = reports.iter().all(|r| r.passed());
        let witnesses = reports.iter().flat_map(|r| r.violations.iter().map(witness)).collect();
        let triples: usize = reports.iter().map(|r| r.triples_checked).sum();
        let summary = format!("{triples} triples checked: {}", pass_word(ok));
        report(Task::Cocycle, ok, summary, witnesses, to_value(&reports))
    }

    fn round_trip(&self) -> TaskReport {
        let mut ok = true;
        let mut witnesses = Vec::new();
        let mut details = Vec::new();
        for (c, b) in self.bundle().components().iter().enumerate() {
            let p = match to_principal(b) {
                Ok(p) => p,
                Err(e) => return error(Task::RoundTrip, format!("component {c}: {e}")),
            };
            let principal = check_principal(&p);
            let projected = projected_cocycle(&p);
            let back = match from_principal(&p) {
                Ok(x) => x,
                Err(e) => return error(Task::RoundTrip, format!("component {c}: {e}")),
            };
            let entry = match bundle_isomorphism(b, &back) {
                Ok(w) => {
                    let good = w.residual <= self.tol && principal.passed() && projected.passed();
                    ok &= good;
                    json!({
                        "component": c,
                        "vertex_map": w.vertex_map,
                        "residual": w.residual,
                        "factors": w.factors.iter().map(matrix_to_json).collect::<Vec<_>>(),
                        "principal": to_value(&principal),
                        "projected_cocycle": projected.passed(),
                    })
                }
                Err(failure) => {
                    ok = false;
                    witnesses.push(format!("component {c}: {}", to_value(&failure)));
                    json!({ "component": c, "failure": to_value(&failure) })
                }
            };
            details.push(entry);
        }
        let summary = format!("{} components through the orbit space and back: {}", details.len(), pass_word(ok));
        report(Task::RoundTrip, ok, summary, witnesses, Value::Array(details))
    }

    fn split(&self) -> TaskReport {
        let b = self.bundle();
        let s = b.split_by_conjugates();
        let (reduction_ok, reduction) = match b.reduce_to_normal() {
            Ok((_, r)) => (r.passed(), to_value(&r)),
            Err(e) => return error(Task::Split, e),
        };
        let ok = s.passed() && reduction_ok;
        let summary = format!("{} conjugate fixed sets: {}", s.components, pass_word(ok));
        report(Task::Split, ok, summary, Vec::new(), json!({ "split": to_value(&s), "reduction": reduction }))
    }

    fn classification(&self) -> TaskReport {
        match classification_pairing(self.bundle().components()) {
            Ok(records) => {
                let summary = format!("{} orbit-space components classified", records.len());
                report(Task::Classification, true, summary, Vec::new(), to_value(&records))
            }
            Err(e) => error(Task::Classification, e),
        }
    }
}

fn failed_degrees(t: &[crate::apc::TransferDegree]) -> Vec<String> {
    t.iter()
        .filter(|d| !d.holds)
        .map(|d| format!("TransferFails: degree {}: quotient {} against invariants {}", d.degree, d.quotient_betti, d.invariant_dim))
        .collect()
}
