//! Regularity checks, pressures, and structural findings.
//!
//! Crossing a half-edge `h` from its face into its twin's face raises the
//! pressure by the half-edge's signed curvature. The exterior has pressure
//! zero, so a circle of radius `r` encloses pressure `1/r`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::f64::consts::PI;

use serde::Serialize;

use crate::arc::wrap_angle;
use crate::complex::{BubbleComplex, EdgeId, FaceId, HalfEdgeId, RegionLabel, VertexId};
use crate::error::{Error, Result};

/// Default tolerance for dimensionless residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionResult {
    pub evaluated: bool,
    pub pass: bool,
    /// Largest violation found; always non-negative.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ConditionResult {
    fn measured(residual: f64, tol: f64) -> Self {
        ConditionResult { evaluated: true, pass: residual <= tol, residual, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    /// A face bounded by two curves in a complex enclosing three or more areas.
    TwoGon,
    /// A face with more than six sides while all pressures agree.
    TooManySides,
    /// A 4-gon or 5-gon meeting the exterior along two or more curves.
    DoubleExteriorEdge,
    /// A chamber that encloses none of the prescribed areas.
    EmptyChamber,
}

impl FindingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingKind::TwoGon => "two_gon",
            FindingKind::TooManySides => "too_many_sides",
            FindingKind::DoubleExteriorEdge => "double_exterior_edge",
            FindingKind::EmptyChamber => "empty_chamber",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub faces: Vec<FaceId>,
    pub edges: Vec<EdgeId>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub finite: ConditionResult,
    pub constant_curvature: ConditionResult,
    pub trivalent: ConditionResult,
    pub angles_2pi3: ConditionResult,
    pub pair_curvature_consistency: ConditionResult,
    pub cocycle: ConditionResult,
    pub variational_minimality: ConditionResult,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn conditions(&self) -> [(&'static str, &ConditionResult); 7] {
        [
            ("finite", &self.finite),
            ("constant_curvature", &self.constant_curvature),
            ("trivalent", &self.trivalent),
            ("angles_2pi3", &self.angles_2pi3),
            ("pair_curvature_consistency", &self.pair_curvature_consistency),
            ("cocycle", &self.cocycle),
            ("variational_minimality", &self.variational_minimality),
        ]
    }

    /// Every evaluated condition passes.
    pub fn conditions_pass(&self) -> bool {
        self.conditions().iter().all(|(_, c)| !c.evaluated || c.pass)
    }

    /// All evaluated conditions pass and there are no structural findings.
    pub fn passes(&self) -> bool {
        self.conditions_pass() && self.findings.is_empty()
    }

    pub fn has_finding(&self, kind: FindingKind) -> bool {
        self.findings.iter().any(|f| f.kind == kind)
    }
}

/// Pressures of every face and every region; the exterior is zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureMap {
    pub faces: Vec<f64>,
    pub regions: BTreeMap<RegionLabel, f64>,
}

impl PressureMap {
    pub fn region(&self, r: RegionLabel) -> Option<f64> {
        self.regions.get(&r).copied()
    }
}

pub fn validate(c: &BubbleComplex, tol: f64) -> ValidationReport {
    let diam = c.diameter();
    let finite_bad = c.vertices().iter().filter(|p| !p.is_finite()).count()
        + c.edges().iter().filter(|e| !e.half_angle.is_finite()).count();
    let finite = ConditionResult::measured(finite_bad as f64, tol);
    let constant_curvature = ConditionResult::measured(0.0, tol).with_note("every edge is a circular arc or segment");

    let bad_degree: Vec<VertexId> = c.corner_vertices().filter(|&v| c.degree(v) != 3).collect();
    let mut trivalent = ConditionResult::measured(bad_degree.len() as f64, tol);
    if !bad_degree.is_empty() {
        trivalent = trivalent.with_note(format!(
            "vertices with degree other than 3: {}",
            bad_degree.iter().map(|v| format!("{v} (degree {})", c.degree(*v))).collect::<Vec<_>>().join(", ")
        ));
    }

    let angles_2pi3 = ConditionResult::measured(angle_residual(c), tol);
    let pair_curvature_consistency = ConditionResult::measured(pair_curvature_residual(c) * diam, tol);
    let cocycle = ConditionResult::measured(cocycle_residual(c) * diam, tol);
    let variational_minimality = ConditionResult { evaluated: false, pass: false, residual: 0.0, note: None }
        .with_note("not evaluated: requires a variational search; see the moves for explicit witnesses");

    let mut report = ValidationReport {
        tolerance: tol,
        finite,
        constant_curvature,
        trivalent,
        angles_2pi3,
        pair_curvature_consistency,
        cocycle,
        variational_minimality,
        findings: Vec::new(),
    };
    report.findings = findings(c, tol, report.cocycle.pass);
    report
}

/// Counterclockwise sweeps between consecutive outgoing tangents at `v`.
pub fn vertex_sweeps(c: &BubbleComplex, v: VertexId) -> Vec<f64> {
    let out = c.outgoing(v);
    if out.len() == 1 {
        return vec![2.0 * PI];
    }
    let angles: Vec<f64> = out.iter().map(|&h| c.half_edge_arc(h).start_tangent().angle()).collect();
    (0..angles.len())
        .map(|i| {
            let d = angles[(i + 1) % angles.len()] - angles[i];
            d.rem_euclid(2.0 * PI)
        })
        .collect()
}

/// Largest deviation of a corner angle from 2π/3, over all corner vertices.
pub fn angle_residual(c: &BubbleComplex) -> f64 {
    c.corner_vertices().flat_map(|v| vertex_sweeps(c, v)).map(|s| (s - 2.0 * PI / 3.0).abs()).fold(0.0, f64::max)
}

/// Spread of signed curvatures among the edges separating each pair of regions
/// (in curvature units).
pub fn pair_curvature_residual(c: &BubbleComplex) -> f64 {
    let mut groups: BTreeMap<(RegionLabel, RegionLabel), Vec<f64>> = BTreeMap::new();
    for e in c.edge_ids() {
        let h = e.forward();
        let (a, b) = (c.region_of(c.half_edge(h).face), c.region_of(c.half_edge(h.twin()).face));
        let k = c.curvature(h);
        if a == b {
            groups.entry((a, b)).or_default().extend([k, -k]);
        } else if a < b {
            groups.entry((a, b)).or_default().push(k);
        } else {
            groups.entry((b, a)).or_default().push(-k);
        }
    }
    groups
        .values()
        .map(|ks| {
            let lo = ks.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Pressure of every face from a breadth-first walk of the dual graph.
fn bfs_pressures(c: &BubbleComplex) -> Vec<f64> {
    let mut p = vec![f64::NAN; c.faces().len()];
    p[0] = 0.0;
    let mut queue = VecDeque::from([FaceId(0)]);
    while let Some(f) = queue.pop_front() {
        for h in c.face(f).half_edges() {
            let g = c.half_edge(h.twin()).face;
            if p[g.0].is_nan() {
                p[g.0] = p[f.0] + c.curvature(h);
                queue.push_back(g);
            }
        }
    }
    p
}

/// Failure of signed curvatures to sum to zero around closed dual paths, in
/// curvature units. Includes disagreement between faces of the same region.
pub fn cocycle_residual(c: &BubbleComplex) -> f64 {
    let p = bfs_pressures(c);
    let mut r: f64 = 0.0;
    for e in c.edge_ids() {
        let h = e.forward();
        let (f, g) = (c.half_edge(h).face, c.half_edge(h.twin()).face);
        r = r.max((p[g.0] - p[f.0] - c.curvature(h)).abs());
    }
    for faces in c.regions().values() {
        let lo = faces.iter().map(|f| p[f.0]).fold(f64::INFINITY, f64::min);
        let hi = faces.iter().map(|f| p[f.0]).fold(f64::NEG_INFINITY, f64::max);
        r = r.max(hi - lo);
    }
    r
}

/// Pressures of all faces and regions, provided the cocycle check passes at `tol`
/// (measured relative to the complex's diameter).
pub fn pressures(c: &BubbleComplex, tol: f64) -> Result<PressureMap> {
    let res = cocycle_residual(c);
    if res * c.diameter() > tol {
        return Err(Error::PressureUndefined(res));
    }
    let faces = bfs_pressures(c);
    let mut regions = BTreeMap::from([(RegionLabel::EXTERIOR, 0.0)]);
    for f in c.interior_faces() {
        regions.entry(f.region).or_insert(faces[f.id.0]);
    }
    Ok(PressureMap { faces, regions })
}

pub fn pressure(c: &BubbleComplex, r: RegionLabel) -> Result<f64> {
    if !r.is_exterior() && !c.regions().contains_key(&r) {
        return Err(Error::InvalidArgument(format!("unknown region {r}")));
    }
    Ok(pressures(c, DEFAULT_TOL)?.regions[&r])
}

/// Pressure accumulated along an explicit dual path: a chain of crossings
/// starting in the exterior, each entering the face the next one leaves.
pub fn pressure_along(c: &BubbleComplex, crossings: &[HalfEdgeId]) -> Result<f64> {
    let mut at = c.exterior();
    let mut p = 0.0;
    for &h in crossings {
        if h.0 >= c.half_edge_count() || c.half_edge(h).face != at {
            return Err(Error::InvalidArgument(format!("crossing {h} does not leave face {at}")));
        }
        p += c.curvature(h);
        at = c.half_edge(h.twin()).face;
    }
    Ok(p)
}

/// `|ℓ − 2 Σ pᵢ Aᵢ| / ℓ`, which vanishes for regular complexes.
pub fn perimeter_pressure_residual(c: &BubbleComplex) -> Result<f64> {
    let p = pressures(c, DEFAULT_TOL)?;
    let len = c.total_perimeter();
    let sum: f64 = c.interior_faces().map(|f| p.faces[f.id.0] * c.signed_face_area(f.id)).sum();
    Ok((len - 2.0 * sum).abs() / len)
}

/// `|Σ κᵢlᵢ + Σ turning − 2π|` around a face, with the boundary traversed
/// counterclockwise.
pub fn gauss_bonnet_residual(c: &BubbleComplex, f: FaceId) -> Result<f64> {
    if f == c.exterior() || f.0 >= c.faces().len() {
        return Err(Error::InvalidArgument("Gauss-Bonnet residual needs an interior face".into()));
    }
    let cyc = c.face(f).boundary();
    let mut total = 0.0;
    for (i, &h) in cyc.iter().enumerate() {
        let a = c.half_edge_arc(h);
        total += -2.0 * a.half_angle();
        let next = c.half_edge_arc(cyc[(i + 1) % cyc.len()]);
        total += wrap_angle(next.start_tangent().angle() - a.end_tangent().angle());
    }
    Ok((total - 2.0 * PI).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PressureVerdict {
    /// Every pressure of the first complex is lower, so the second uses more perimeter.
    SecondLonger,
    /// Every pressure of the second complex is lower, so the first uses more perimeter.
    FirstLonger,
    Inconclusive,
}

/// Compares two complexes enclosing the same areas through `ℓ = 2 Σ pᵢAᵢ`:
/// uniformly higher pressures mean strictly more perimeter.
pub fn compare_by_pressure(c1: &BubbleComplex, c2: &BubbleComplex) -> Result<PressureVerdict> {
    let (a1, a2) = (c1.region_areas(), c2.region_areas());
    if a1.keys().ne(a2.keys()) {
        return Err(Error::InvalidArgument("complexes enclose different sets of regions".into()));
    }
    for (r, x) in &a1 {
        let y = a2[r];
        if (x - y).abs() > 1e-9 * x.abs().max(y.abs()).max(1.0) {
            return Err(Error::InvalidArgument(format!("region {r} areas differ: {x} vs {y}")));
        }
    }
    let (p1, p2) = (pressures(c1, DEFAULT_TOL)?, pressures(c2, DEFAULT_TOL)?);
    let pairs: Vec<(f64, f64)> = a1.keys().map(|r| (p1.regions[r], p2.regions[r])).collect();
    if pairs.iter().all(|(x, y)| x < y) {
        Ok(PressureVerdict::SecondLonger)
    } else if pairs.iter().all(|(x, y)| y < x) {
        Ok(PressureVerdict::FirstLonger)
    } else {
        Ok(PressureVerdict::Inconclusive)
    }
}

/// Distinct curves separating face `f` from the exterior.
pub fn exterior_curves(c: &BubbleComplex, f: FaceId) -> BTreeSet<usize> {
    c.shared_edges(f, c.exterior()).into_iter().map(|e| c.curve_of(e)).collect()
}

fn findings(c: &BubbleComplex, tol: f64, pressure_ok: bool) -> Vec<Finding> {
    let mut out = Vec::new();
    let areas = c.region_labels().len();
    let equal_pressure = pressure_ok
        && pressures(c, f64::INFINITY).is_ok_and(|p| {
            let vals: Vec<f64> = p.regions.iter().filter(|(r, _)| !r.is_exterior()).map(|(_, &v)| v).collect();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            vals.is_empty() || (hi - lo) * c.diameter() <= tol
        });
    for f in c.interior_faces() {
        let edges: Vec<EdgeId> = f.half_edges().map(|h| h.edge()).collect();
        if f.side_count == 2 && areas > 2 {
            out.push(Finding {
                kind: FindingKind::TwoGon,
                faces: vec![f.id],
                edges: edges.clone(),
                message: format!("face {} (region {}) is a 2-gon", f.id, f.region),
            });
        }
        if f.side_count > 6 && equal_pressure {
            out.push(Finding {
                kind: FindingKind::TooManySides,
                faces: vec![f.id],
                edges: edges.clone(),
                message: format!("face {} has {} sides although all pressures are equal", f.id, f.side_count),
            });
        }
        if matches!(f.side_count, 4 | 5) {
            let ext = exterior_curves(c, f.id);
            if ext.len() >= 2 {
                out.push(Finding {
                    kind: FindingKind::DoubleExteriorEdge,
                    faces: vec![f.id],
                    edges: c.shared_edges(f.id, c.exterior()),
                    message: format!(
                        "{}-gon face {} meets the exterior along {} curves",
                        f.side_count,
                        f.id,
                        ext.len()
                    ),
                });
            }
        }
        if f.region.is_empty_chamber() {
            out.push(Finding {
                kind: FindingKind::EmptyChamber,
                faces: vec![f.id],
                edges,
                message: format!("face {} is an empty chamber", f.id),
            });
        }
    }
    out
}
