//! The JSON problem description and its resolution into validated objects.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{RunError, Task};
use crate::bundles::{EquivariantAtlas, NonNormalBundle, TransitionBundle, Transitions};
use crate::complex::{GComplex, SimplicialComplex};
use crate::exactmath::CxMatrix;
use crate::groups::{FiniteGroup, HSection, Subgroup};
use crate::model::{CanonicalModel, EquivariantAutomorphism, NonNormalModel};
use crate::reps::{irreps, UnitaryRep};

/// A problem: one group, optionally a complex it acts on, named
/// representations, a fiber model, a bundle, and the tasks to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    pub group: GroupBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexBlock>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub reps: BTreeMap<String, RepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleBlock>,
    pub tasks: Vec<String>,
}

/// Either a multiplication table (identity first) or permutation generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexBlock {
    pub vertices: usize,
    /// Top simplices; faces are implied.
    pub facets: Vec<Vec<usize>>,
    /// One sign per top-dimensional simplex in sorted order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i64>>,
    /// Vertex permutations; the trivial action when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionBlock>,
}

/// Permutations for the group's generators, or for every element in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<usize>>>,
}

/// A representation of a subgroup (the whole group when `subgroup` is
/// absent), as matrices indexed by the subgroup's elements in ascending
/// order, or as an index into the shipped irreducible representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Matrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irrep: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    pub subgroup: Vec<usize>,
    pub rep: String,
    pub f_dim: usize,
    /// Coset representatives; the least element of each coset when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversal: Option<Vec<usize>>,
}

/// Charts on the fixed set of the model subgroup and transition data for
/// the first component. Values apply in order: the base (trivial or none),
/// chart gauge factors, then explicit per-cell values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleBlock {
    pub charts: Vec<Vec<usize>>,
    #[serde(default)]
    pub base: BundleBase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<Vec<Matrix>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<TransitionValue>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleBase {
    #[default]
    Trivial,
    None,
}

/// `Ψ_{αβ}` on the cell containing `cell`, covering the coset of the group element `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionValue {
    pub charts: (usize, usize),
    pub cell: Vec<usize>,
    pub a: usize,
    pub blocks: Vec<Matrix>,
}

/// A real number as a JSON number or an exact `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Exact(String),
}

/// Rows of `[re, im]` pairs.
pub type Matrix = Vec<Vec<[Number; 2]>>;

impl Number {
    fn value(&self, field: &str) -> Result<f64, RunError> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Exact(s) => s
                .parse::<BigRational>()
                .ok()
                .and_then(|r| r.to_f64())
                .ok_or_else(|| RunError::parse(field, format!("`{s}` is not a rational of the form p/q"))),
        }
    }
}

pub fn matrix_from_json(m: &Matrix, field: &str) -> Result<CxMatrix, RunError> {
    let cols = m.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(m.len());
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(RunError::parse(format!("{field}[{i}]"), "rows have different lengths"));
        }
        let entries = row
            .iter()
            .enumerate()
            .map(|(j, [re, im])| {
                let f = format!("{field}[{i}][{j}]");
                Ok(Complex64::new(re.value(&f)?, im.value(&f)?))
            })
            .collect::<Result<Vec<_>, RunError>>()?;
        rows.push(entries);
    }
    Ok(CxMatrix::from_rows(rows))
}

pub fn matrix_to_json(m: &CxMatrix) -> Matrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    [Number::Float(z.re), Number::Float(z.im)]
                })
                .collect()
        })
        .collect()
}

/// A fully validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub group: FiniteGroup,
    pub complex: Option<GComplex>,
    pub model: Option<ModelSetup>,
    pub bundle: Option<NonNormalBundle>,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone)]
pub struct ModelSetup {
    pub subgroup: Subgroup,
    pub rho: UnitaryRep,
    pub f_dim: usize,
    /// Present exactly when the subgroup is normal.
    pub canonical: Option<CanonicalModel>,
    pub nonnormal: NonNormalModel,
}

/// Resolve names and validate every block, in dependency order.
pub fn resolve(spec: &ProblemSpec, tol: Option<f64>) -> Result<Problem, RunError> {
    let group = resolve_group(&spec.group)?;
    let mut tasks = Vec::new();
    for (i, entry) in spec.tasks.iter().enumerate() {
        // entries may list several tasks separated by commas
        for t in entry.split(',') {
            let task = Task::parse(t).ok_or_else(|| RunError::parse(format!("tasks[{i}]"), format!("unknown task `{}`", t.trim())))?;
            tasks.push((i, task));
        }
    }
    let complex = spec.complex.as_ref().map(|c| resolve_complex(c, &group)).transpose()?;
    let model = spec.model.as_ref().map(|m| resolve_model(spec, m, &group, tol)).transpose()?;
    let bundle = match &spec.bundle {
        None => None,
        Some(b) => {
            let total = complex.as_ref().ok_or_else(|| RunError::parse("bundle", "a bundle needs a complex block"))?;
            let model = model.as_ref().ok_or_else(|| RunError::parse("bundle", "a bundle needs a model block"))?;
            Some(resolve_bundle(b, total, model)?)
        }
    };
    for &(i, task) in &tasks {
        let field = format!("tasks[{i}]");
        if task.needs_complex() && complex.is_none() {
            return Err(RunError::parse(field, format!("task `{}` needs a complex block", task.name())));
        }
        if task.needs_model() && model.is_none() {
            return Err(RunError::parse(field, format!("task `{}` needs a model block", task.name())));
        }
        if task.needs_bundle() && bundle.is_none() {
            return Err(RunError::parse(field, format!("task `{}` needs a bundle block", task.name())));
        }
    }
    let mut tasks: Vec<Task> = tasks.into_iter().map(|(_, t)| t).collect();
    tasks.sort();
    tasks.dedup();
    Ok(Problem {
        name: spec.name.clone(),
        group,
        complex,
        model,
        bundle,
        tasks,
    })
}

fn resolve_group(block: &GroupBlock) -> Result<FiniteGroup, RunError> {
    let name = block.name.clone().unwrap_or_else(|| "G".to_string());
    let group = match (&block.table, &block.generators) {
        (Some(table), None) => FiniteGroup::from_table(name, table.clone()),
        (None, Some(gens)) => {
            let degree = block
                .degree
                .ok_or_else(|| RunError::parse("group.degree", "permutation generators need a degree"))?;
            FiniteGroup::from_permutations(name, degree, gens)
        }
        (Some(_), Some(_)) => return Err(RunError::parse("group", "give either a table or generators, not both")),
        (None, None) => return Err(RunError::parse("group", "missing table or generators")),
    };
    group.map_err(|e| RunError::validation("group", e))
}

fn resolve_complex(block: &ComplexBlock, group: &FiniteGroup) -> Result<GComplex, RunError> {
    let complex = SimplicialComplex::from_facets(block.vertices, &block.facets).map_err(|e| RunError::validation("complex", e))?;
    let c = match &block.action {
        None => GComplex::trivial(complex, group.clone()),
        Some(ActionBlock {
            generators: Some(gens),
            elements: None,
        }) => GComplex::from_generators(complex, group.clone(), gens).map_err(|e| RunError::validation("complex.action", e))?,
        Some(ActionBlock {
            generators: None,
            elements: Some(perms),
        }) => GComplex::new(complex, group.clone(), perms.clone()).map_err(|e| RunError::validation("complex.action", e))?,
        Some(_) => return Err(RunError::parse("complex.action", "give exactly one of generators or elements")),
    };
    match &block.orientation {
        None => Ok(c),
        Some(signs) => c.with_orientation(signs.clone()).map_err(|e| RunError::validation("complex.orientation", e)),
    }
}

fn resolve_subgroup(group: &FiniteGroup, elements: &[usize], field: &str) -> Result<Subgroup, RunError> {
    Subgroup::new(group, elements).map_err(|e| RunError::validation(field, e))
}

fn resolve_rep(name: &str, block: &RepBlock, group: &FiniteGroup, tol: Option<f64>) -> Result<(Subgroup, UnitaryRep), RunError> {
    let field = format!("reps.{name}");
    let sub = match &block.subgroup {
        Some(elements) => resolve_subgroup(group, elements, &format!("{field}.subgroup"))?,
        None => Subgroup::whole(group),
    };
    let local = sub.to_group(group).group;
    let rep = match (&block.matrices, block.irrep) {
        (Some(matrices), None) => {
            let ms = matrices
                .iter()
                .enumerate()
                .map(|(i, m)| matrix_from_json(m, &format!("{field}.matrices[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            UnitaryRep::new(name, &local, ms, tol.unwrap_or(crate::exactmath::DEFAULT_TOL))
                .map_err(|e| RunError::validation(&field, e))?
        }
        (None, Some(k)) => {
            let list = irreps(&local).map_err(|e| RunError::validation(&field, e))?;
            let count = list.len();
            let rep = list
                .into_iter()
                .nth(k)
                .ok_or_else(|| RunError::parse(format!("{field}.irrep"), format!("index {k} out of range for {count} irreps")))?;
            let rep = rep.with_name(name);
            match tol {
                Some(t) => rep.with_tol(t),
                None => rep,
            }
        }
        _ => return Err(RunError::parse(&field, "give exactly one of matrices or irrep")),
    };
    Ok((sub, rep))
}

fn resolve_model(spec: &ProblemSpec, block: &ModelBlock, group: &FiniteGroup, tol: Option<f64>) -> Result<ModelSetup, RunError> {
    let subgroup = resolve_subgroup(group, &block.subgroup, "model.subgroup")?;
    let rep_block = spec
        .reps
        .get(&block.rep)
        .ok_or_else(|| RunError::parse("model.rep", format!("no representation named `{}`", block.rep)))?;
    let (rep_sub, rho) = resolve_rep(&block.rep, rep_block, group, tol)?;
    if rep_sub != subgroup {
        return Err(RunError::validation("model.rep", "representation is defined on a different subgroup"));
    }
    let canonical = if subgroup.is_normal_in(group) {
        let section = HSection::new(group, &subgroup, block.transversal.as_deref()).map_err(|e| RunError::validation("model.transversal", e))?;
        Some(CanonicalModel::build(group, &section, &rho, block.f_dim).map_err(|e| RunError::validation("model", e))?)
    } else {
        if block.transversal.is_some() {
            return Err(RunError::parse("model.transversal", "a transversal is only used for normal subgroups"));
        }
        None
    };
    let nonnormal = NonNormalModel::build(group, &subgroup, &rho, block.f_dim).map_err(|e| RunError::validation("model", e))?;
    Ok(ModelSetup {
        subgroup,
        rho,
        f_dim: block.f_dim,
        canonical,
        nonnormal,
    })
}

fn resolve_bundle(block: &BundleBlock, total: &GComplex, setup: &ModelSetup) -> Result<NonNormalBundle, RunError> {
    let nn = &setup.nonnormal;
    let model = &nn.components()[0].model;
    let atlas = NonNormalBundle::fixed_atlas(total, nn, &block.charts).map_err(|e| RunError::validation("bundle.charts", e))?;
    let mut first = match block.base {
        BundleBase::Trivial => crate::bundles::trivial_bundle(&atlas, model).map_err(|e| RunError::validation("bundle.base", e))?,
        BundleBase::None => TransitionBundle::new(atlas.clone(), model.clone(), Transitions::new())
            .map_err(|e| RunError::validation("bundle.base", e))?,
    };
    if let Some(gauge) = &block.gauge {
        let factors = gauge
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_json(m, &format!("bundle.gauge[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        first = crate::bundles::gauge_transform(&first, &factors).map_err(|e| RunError::validation("bundle.gauge", e))?;
    }
    let comp = &nn.components()[0];
    let vertices = fixed_vertices(total, &atlas, nn)?;
    for (i, value) in block.values.iter().enumerate() {
        let field = format!("bundle.values[{i}]");
        let (alpha, beta) = value.charts;
        if alpha >= beta || beta >= atlas.chart_count() {
            return Err(RunError::parse(format!("{field}.charts"), "need chart indices alpha < beta"));
        }
        let mut local = value
            .cell
            .iter()
            .map(|v| vertices.binary_search(v).ok())
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| RunError::parse(format!("{field}.cell"), "vertex outside the fixed set"))?;
        local.sort_unstable();
        if local.is_empty() {
            return Err(RunError::parse(format!("{field}.cell"), "empty cell"));
        }
        let k = local.len() - 1;
        let idx = atlas
            .total()
            .complex()
            .index_of(&local)
            .ok_or_else(|| RunError::parse(format!("{field}.cell"), "not a simplex of the fixed set"))?;
        let cell = atlas.cell_of((k, idx));
        let a_local = comp
            .normalizer
            .local(value.a)
            .ok_or_else(|| RunError::parse(format!("{field}.a"), "element outside the normalizer"))?;
        let a = model.section().coset_of(a_local);
        let blocks = value
            .blocks
            .iter()
            .enumerate()
            .map(|(j, m)| matrix_from_json(m, &format!("{field}.blocks[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let aut = EquivariantAutomorphism::from_blocks(model, a, blocks).map_err(|e| RunError::validation(&field, e))?;
        first = first.with_transition(alpha, beta, cell, aut);
    }
    NonNormalBundle::induce(total, nn.clone(), first).map_err(|e| RunError::validation("bundle", e))
}

/// Ambient labels of the first component's vertices.
fn fixed_vertices(total: &GComplex, atlas: &EquivariantAtlas, nn: &NonNormalModel) -> Result<Vec<usize>, RunError> {
    let h = &nn.components()[0].conjugate;
    let fixed: Vec<usize> = (0..total.complex().vertex_count())
        .filter(|&v| h.elements().iter().all(|&x| total.vertex_perm(x)[v] == v))
        .collect();
    if fixed.len() != atlas.total().complex().vertex_count() {
        return Err(RunError::validation("bundle", "fixed set does not match the first component"));
    }
    Ok(fixed)
}
