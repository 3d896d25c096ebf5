use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::BundleError;
use crate::complex::{GComplex, SimplicialComplex};
use crate::groups::FiniteGroup;

/// A simplex of the total complex as `(dimension, index)`.
pub type SimplexId = (usize, usize);

/// A failed atlas condition, naming the offending simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum AtlasViolation {
    /// A non-identity element maps a simplex to itself.
    NotFree { element: usize, simplex: Vec<usize> },
    /// A sheet meets one of its own translates.
    TranslatesMeet { chart: usize, element: usize, simplex: Vec<usize> },
    /// Two charts meet through more than one translate.
    AmbiguousOverlap { charts: (usize, usize), classes: Vec<usize>, cells: Vec<Vec<usize>> },
    /// A simplex lies in no translate of any sheet.
    Uncovered { simplex: Vec<usize> },
    /// The orbit complex is not a simplicial complex at this simplex.
    QuotientNotSimplicial { simplex: Vec<usize> },
}

impl std::fmt::Display for AtlasViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtlasViolation::NotFree { element, simplex } => write!(f, "element {element} fixes simplex {simplex:?}"),
            AtlasViolation::TranslatesMeet { chart, element, simplex } => {
                write!(f, "chart {chart} meets its translate by {element} at {simplex:?}")
            }
            AtlasViolation::AmbiguousOverlap { charts, classes, cells } => write!(
                f,
                "charts {} and {} meet through classes {classes:?} at {cells:?}",
                charts.0, charts.1
            ),
            AtlasViolation::Uncovered { simplex } => write!(f, "simplex {simplex:?} is not covered"),
            AtlasViolation::QuotientNotSimplicial { simplex } => {
                write!(f, "orbit of {simplex:?} collapses in the quotient")
            }
        }
    }
}

/// Summary of one overlap `U_α ∩ U_β` with its class `g_{αβ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapSummary {
    pub charts: (usize, usize),
    pub class: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtlasReport {
    pub charts: usize,
    pub cells: usize,
    pub overlaps: Vec<OverlapSummary>,
    pub violations: Vec<AtlasViolation>,
}

impl AtlasReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Charts over the orbit space of a free `G₀`-complex.
///
/// Chart `α` is given by center vertices; its sheet `S_α` is their open star
/// in the total complex, `O_α = G₀·S_α` and `U_α` is the image of `S_α` in
/// the orbit space. Cells of the orbit space are simplex orbits.
#[derive(Debug, Clone)]
pub struct EquivariantAtlas {
    total: GComplex,
    charts: Vec<Vec<usize>>,
    cell_of: Vec<Vec<usize>>,
    cells: Vec<SimplexId>,
    sheets: Vec<BTreeSet<SimplexId>>,
}

impl EquivariantAtlas {
    pub fn new(total: GComplex, charts: Vec<Vec<usize>>) -> Result<Self, BundleError> {
        let complex = total.complex();
        for (chart, centers) in charts.iter().enumerate() {
            if centers.is_empty() {
                return Err(BundleError::EmptyChart { chart });
            }
            let distinct: BTreeSet<usize> = centers.iter().copied().collect();
            if let Some(&vertex) = centers.iter().find(|&&v| v >= complex.vertex_count()) {
                return Err(BundleError::BadCenter { chart, vertex });
            }
            if distinct.len() != centers.len() {
                return Err(BundleError::BadCenter { chart, vertex: centers[0] });
            }
        }
        let mut cell_of: Vec<Vec<usize>> = (0..=complex.dim()).map(|k| vec![usize::MAX; complex.count(k)]).collect();
        let mut cells = Vec::new();
        for k in 0..=complex.dim() {
            for idx in 0..complex.count(k) {
                if cell_of[k][idx] != usize::MAX {
                    continue;
                }
                let id = cells.len();
                cells.push((k, idx));
                for g in total.group().elements() {
                    let (image, _) = total.act_simplex(g, k, idx).expect("validated action");
                    cell_of[k][image] = id;
                }
            }
        }
        let sheets = charts
            .iter()
            .map(|centers| {
                let mut sheet = BTreeSet::new();
                for k in 0..=complex.dim() {
                    for (idx, s) in complex.simplices(k).iter().enumerate() {
                        if s.iter().any(|v| centers.contains(v)) {
                            sheet.insert((k, idx));
                        }
                    }
                }
                sheet
            })
            .collect();
        Ok(EquivariantAtlas { total, charts, cell_of, cells, sheets })
    }

    pub fn total(&self) -> &GComplex {
        &self.total
    }

    /// The group `G₀` acting on the total complex.
    pub fn group(&self) -> &FiniteGroup {
        self.total.group()
    }

    pub fn charts(&self) -> &[Vec<usize>] {
        &self.charts
    }

    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_of(&self, s: SimplexId) -> usize {
        self.cell_of[s.0][s.1]
    }

    /// The least-index simplex of a cell.
    pub fn cell_representative(&self, cell: usize) -> SimplexId {
        self.cells[cell]
    }

    pub fn vertices(&self, s: SimplexId) -> &[usize] {
        &self.total.complex().simplices(s.0)[s.1]
    }

    pub fn sheet(&self, chart: usize) -> &BTreeSet<SimplexId> {
        &self.sheets[chart]
    }

    /// The simplex of `cell` lying in the sheet of `chart`, if any.
    pub fn lift(&self, chart: usize, cell: usize) -> Option<SimplexId> {
        let (k, idx) = self.cells[cell];
        self.group().elements().find_map(|g| {
            let (image, _) = self.total.act_simplex(g, k, idx).expect("validated action");
            self.sheets[chart].contains(&(k, image)).then_some((k, image))
        })
    }

    pub fn contains(&self, chart: usize, cell: usize) -> bool {
        self.lift(chart, cell).is_some()
    }

    /// Cells of `U_α`, ascending.
    pub fn chart_cells(&self, chart: usize) -> BTreeSet<usize> {
        self.sheets[chart].iter().map(|&s| self.cell_of(s)).collect()
    }

    /// All classes `g` with `S_α ∩ g·S_β ≠ ∅`, each with the cells where it occurs.
    pub fn overlap_classes(&self, alpha: usize, beta: usize) -> Vec<(usize, Vec<usize>)> {
        let g0 = self.group();
        let mut classes: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &(k, idx) in &self.sheets[alpha] {
            for g in g0.elements() {
                let (moved, _) = self.total.act_simplex(g0.inv(g), k, idx).expect("validated action");
                if self.sheets[beta].contains(&(k, moved)) {
                    classes.entry(g).or_default().insert(self.cell_of[k][idx]);
                }
            }
        }
        classes.into_iter().map(|(g, cells)| (g, cells.into_iter().collect())).collect()
    }

    /// The class `g_{αβ}` and the cells of `U_α ∩ U_β`, when the overlap is
    /// nonempty and unambiguous.
    pub fn overlap(&self, alpha: usize, beta: usize) -> Option<(usize, Vec<usize>)> {
        let mut classes = self.overlap_classes(alpha, beta);
        (classes.len() == 1).then(|| classes.remove(0))
    }

    /// The orbit space as a simplicial complex, with the flat index
    /// (dimension offset plus index) of every cell.
    pub fn base_complex(&self) -> Result<(SimplicialComplex, Vec<usize>), AtlasViolation> {
        let vertex_cell: Vec<usize> = (0..self.total.complex().count(0)).map(|v| self.cell_of[0][v]).collect();
        let vertex_orbits = self.cells.iter().filter(|c| c.0 == 0).count();
        // vertex cells are numbered first, so cell ids of vertices are X-vertex labels
        let mut images: Vec<Vec<usize>> = Vec::with_capacity(self.cells.len());
        let mut seen = BTreeSet::new();
        for &s in &self.cells {
            let mut image: Vec<usize> = self.vertices(s).iter().map(|&v| vertex_cell[v]).collect();
            image.sort_unstable();
            image.dedup();
            if image.len() != s.0 + 1 || !seen.insert(image.clone()) {
                return Err(AtlasViolation::QuotientNotSimplicial {
                    simplex: self.vertices(s).to_vec(),
                });
            }
            images.push(image);
        }
        let base = SimplicialComplex::from_facets(vertex_orbits, &images).expect("orbit images are simplices");
        if base.total_simplices() != self.cells.len() {
            let extra = images
                .iter()
                .zip(&self.cells)
                .find(|(image, _)| image.len() > 1)
                .map_or_else(Vec::new, |(_, &s)| self.vertices(s).to_vec());
            return Err(AtlasViolation::QuotientNotSimplicial { simplex: extra });
        }
        let offsets = base.simplex_offsets();
        let flat = images
            .iter()
            .map(|image| {
                let k = image.len() - 1;
                offsets[k] + base.index_of(image).expect("present")
            })
            .collect();
        Ok((base, flat))
    }
}

/// Check freeness, disjointness of translates, uniqueness of overlap
/// classes, covering, and that the orbit space is simplicial.
pub fn validate_atlas(a: &EquivariantAtlas) -> AtlasReport {
    let total = a.total();
    let g0 = a.group();
    let complex = total.complex();
    let mut violations = Vec::new();

    'free: for g in g0.elements().filter(|&g| g != g0.identity()) {
        for k in 0..=complex.dim() {
            for idx in 0..complex.count(k) {
                if total.act_simplex(g, k, idx).map(|x| x.0) == Some(idx) {
                    violations.push(AtlasViolation::NotFree {
                        element: g,
                        simplex: complex.simplices(k)[idx].clone(),
                    });
                    break 'free;
                }
            }
        }
    }
    for chart in 0..a.chart_count() {
        let hit = a.sheet(chart).iter().find_map(|&(k, idx)| {
            g0.elements().filter(|&g| g != g0.identity()).find_map(|g| {
                let (image, _) = total.act_simplex(g, k, idx).expect("validated action");
                a.sheet(chart).contains(&(k, image)).then_some((g, (k, idx)))
            })
        });
        if let Some((element, s)) = hit {
            violations.push(AtlasViolation::TranslatesMeet {
                chart,
                element,
                simplex: a.vertices(s).to_vec(),
            });
        }
    }
    let mut overlaps = Vec::new();
    for alpha in 0..a.chart_count() {
        for beta in alpha + 1..a.chart_count() {
            let classes = a.overlap_classes(alpha, beta);
            match classes.len() {
                0 => {}
                1 => overlaps.push(OverlapSummary {
                    charts: (alpha, beta),
                    class: classes[0].0,
                    cells: classes[0].1.len(),
                }),
                _ => violations.push(AtlasViolation::AmbiguousOverlap {
                    charts: (alpha, beta),
                    classes: classes.iter().map(|c| c.0).collect(),
                    cells: classes
                        .iter()
                        .map(|c| a.vertices(a.cell_representative(c.1[0])).to_vec())
                        .collect(),
                }),
            }
        }
    }
    let mut covered = vec![false; a.cell_count()];
    for chart in 0..a.chart_count() {
        for cell in a.chart_cells(chart) {
            covered[cell] = true;
        }
    }
    if let Some(cell) = covered.iter().position(|&c| !c) {
        violations.push(AtlasViolation::Uncovered {
            simplex: a.vertices(a.cell_representative(cell)).to_vec(),
        });
    }
    if let Err(v) = a.base_complex() {
        violations.push(v);
    }
    AtlasReport {
        charts: a.chart_count(),
        cells: a.cell_count(),
        overlaps,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::cyclic;

    /// Hexagon with `Z/2` acting by the half turn.
    pub(crate) fn hexagon() -> GComplex {
        let facets: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        let complex = SimplicialComplex::from_facets(6, &facets).unwrap();
        let half: Vec<usize> = (0..6).map(|i| (i + 3) % 6).collect();
        GComplex::from_generators(complex, cyclic(2), &[half]).unwrap()
    }

    #[test]
    fn vertex_star_cover_of_the_circle() {
        let a = EquivariantAtlas::new(hexagon(), vec![vec![0], vec![1], vec![2]]).unwrap();
        let report = validate_atlas(&a);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.overlaps.len(), 3);
        // 0 and 2 meet through the half turn: S_0 ∋ {0,5} = 1·{2,3}
        assert_eq!(a.overlap(0, 2).unwrap().0, 1);
        assert_eq!(a.overlap(0, 1).unwrap().0, 0);
        let (base, _) = a.base_complex().unwrap();
        assert_eq!(base.f_vector(), vec![3, 3]);
    }

    #[test]
    fn two_arc_cover_is_ambiguous() {
        let a = EquivariantAtlas::new(hexagon(), vec![vec![0, 1], vec![2]]).unwrap();
        let report = validate_atlas(&a);
        assert!(matches!(
            report.violations.as_slice(),
            [AtlasViolation::AmbiguousOverlap { charts: (0, 1), .. }]
        ));
    }

    #[test]
    fn oversized_sheet_meets_its_translate() {
        let a = EquivariantAtlas::new(hexagon(), vec![vec![0, 1, 2, 3]]).unwrap();
        let report = validate_atlas(&a);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, AtlasViolation::TranslatesMeet { chart: 0, element: 1, .. })));
    }

    #[test]
    fn single_chart_on_a_free_orbit() {
        let complex = SimplicialComplex::from_facets(3, &[vec![0], vec![1], vec![2]]).unwrap();
        let total = GComplex::from_generators(complex, cyclic(3), &[vec![1, 2, 0]]).unwrap();
        let a = EquivariantAtlas::new(total, vec![vec![0]]).unwrap();
        assert!(validate_atlas(&a).passed());
    }

    #[test]
    fn fixed_points_and_gaps_are_reported() {
        let complex = SimplicialComplex::from_facets(2, &[vec![0, 1]]).unwrap();
        let flip = GComplex::from_generators(complex, cyclic(2), &[vec![1, 0]]).unwrap();
        let a = EquivariantAtlas::new(flip, vec![vec![0]]).unwrap();
        let report = validate_atlas(&a);
        assert!(matches!(report.violations[0], AtlasViolation::NotFree { element: 1, .. }));

        let partial = EquivariantAtlas::new(hexagon(), vec![vec![0]]).unwrap();
        assert!(validate_atlas(&partial)
            .violations
            .iter()
            .any(|v| matches!(v, AtlasViolation::Uncovered { .. })));
    }
}
