//! Local rewrites that certify a complex is not perimeter minimizing.
//!
//! Every move returns a [`MoveReport`] whose deltas are measured on the
//! rebuilt complex. A move either shortens the complex while keeping every
//! area, or keeps the length and produces a complex that breaks regularity.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use serde::{Serialize, Serializer};

use crate::arc::{ArcSpec, Point};
use crate::complex::{BubbleComplex, EdgeId, FaceId, HalfEdgeId, RegionLabel, VertexId};
use crate::document::ComplexDocument;
use crate::error::{Error, Result};
use crate::regularity::{self, exterior_curves, DEFAULT_TOL};
use crate::surgery::Surgery;

/// Relative tolerance on perimeter and area changes.
pub const MOVE_TOL: f64 = 1e-9;

/// Default expanded half-angle for [`pop_and_expand`].
pub const POP_THETA: f64 = 2.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Shorter,
    EqualLengthNonregular,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoveReport {
    #[serde(serialize_with = "as_document")]
    pub result: BubbleComplex,
    pub perimeter_delta: f64,
    pub area_deltas: BTreeMap<RegionLabel, f64>,
    pub witness: Witness,
    /// Regularity condition or finding the result fails, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

fn as_document<S: Serializer>(c: &BubbleComplex, s: S) -> std::result::Result<S::Ok, S::Error> {
    ComplexDocument::from_complex(c).serialize(s)
}

impl MoveReport {
    /// Compares two complexes by measurement.
    pub fn measure(before: &BubbleComplex, after: BubbleComplex) -> Result<MoveReport> {
        let scale = before.total_perimeter().max(1.0);
        let tol = MOVE_TOL * scale;
        let perimeter_delta = after.total_perimeter() - before.total_perimeter();
        let (a0, a1) = (before.region_areas(), after.region_areas());
        let labels: BTreeSet<RegionLabel> = a0.keys().chain(a1.keys()).copied().collect();
        let area_deltas: BTreeMap<RegionLabel, f64> = labels
            .into_iter()
            .map(|r| (r, a1.get(&r).copied().unwrap_or(0.0) - a0.get(&r).copied().unwrap_or(0.0)))
            .collect();
        let area_tol = MOVE_TOL * before.diameter().powi(2).max(1.0);
        if let Some((r, d)) = area_deltas.iter().find(|(_, &d)| d < -area_tol) {
            return Err(Error::Precondition(format!("the move would shrink region {r} by {}", -d)));
        }
        if perimeter_delta > tol {
            return Err(Error::Precondition(format!("the move would lengthen the complex by {perimeter_delta}")));
        }
        let violation = first_violation(&after);
        let witness = if perimeter_delta < -tol {
            Witness::Shorter
        } else if violation.is_some() {
            Witness::EqualLengthNonregular
        } else {
            return Err(Error::Precondition("the move produced a regular complex of equal length".into()));
        };
        Ok(MoveReport { result: after, perimeter_delta, area_deltas, witness, violation })
    }
}

/// Name of the first failing regularity condition, else the first finding.
pub fn first_violation(c: &BubbleComplex) -> Option<String> {
    let report = regularity::validate(c, DEFAULT_TOL);
    if let Some((name, _)) = report.conditions().into_iter().find(|(_, r)| r.evaluated && !r.pass) {
        return Some(name.to_string());
    }
    report.findings.first().map(|f| f.kind.as_str().to_string())
}

fn interior(c: &BubbleComplex, f: FaceId) -> Result<()> {
    if f.0 >= c.faces().len() || f == c.exterior() {
        return Err(Error::InvalidArgument(format!("{f} is not an interior face")));
    }
    Ok(())
}

fn sides(c: &BubbleComplex, f: FaceId, n: usize, what: &str) -> Result<()> {
    interior(c, f)?;
    if c.face(f).side_count != n {
        return Err(Error::Precondition(format!("{f} is a {}-gon, not a {what}", c.face(f).side_count)));
    }
    Ok(())
}

fn on_exterior(c: &BubbleComplex, v: VertexId) -> bool {
    c.outgoing(v).iter().any(|&h| c.half_edge(h).face == c.exterior() || c.half_edge(h.twin()).face == c.exterior())
}

/// The single edge separating `f` and `g`.
fn shared_edge(c: &BubbleComplex, f: FaceId, g: FaceId) -> Result<EdgeId> {
    match c.shared_edges(f, g).as_slice() {
        [e] => Ok(*e),
        [] => Err(Error::Precondition(format!("{f} and {g} are not adjacent"))),
        _ => Err(Error::Precondition(format!("{f} and {g} share more than one edge"))),
    }
}

/// Fills an empty chamber with the neighboring region sharing the longest boundary.
pub fn fill_empty_chamber(c: &BubbleComplex, chamber: FaceId) -> Result<MoveReport> {
    interior(c, chamber)?;
    if !c.region_of(chamber).is_empty_chamber() {
        return Err(Error::Precondition(format!("{chamber} is not an empty chamber")));
    }
    let mut shared: BTreeMap<RegionLabel, f64> = BTreeMap::new();
    for (n, e) in c.neighbors(chamber) {
        let r = c.region_of(n);
        if !r.is_exterior() && !r.is_empty_chamber() {
            *shared.entry(r).or_insert(0.0) += c.edge_arc(e).length();
        }
    }
    let tie = 1e-12 * c.diameter();
    let mut best: Option<(RegionLabel, f64)> = None;
    for (&r, &len) in &shared {
        if best.map_or(true, |(_, l)| len > l + tie) {
            best = Some((r, len));
        }
    }
    let (label, _) = best.ok_or_else(|| Error::Precondition(format!("{chamber} has no interior neighbor")))?;
    let mut s = Surgery::new(c);
    s.relabel(Surgery::key(chamber), label);
    MoveReport::measure(c, s.finish()?)
}

/// Slides a 2-gon along the circle carrying its two outer edges.
///
/// Positive displacements move counterclockwise about that circle's center
/// (for a straight wall, toward the lens corner with the smaller index).
/// The displacement is an arc length and may not exceed the length of the
/// outer edge that shrinks.
pub fn slide_2gon(c: &BubbleComplex, lens: FaceId, displacement: f64) -> Result<MoveReport> {
    interior(c, lens)?;
    if !displacement.is_finite() {
        return Err(Error::NonFinite("displacement"));
    }
    let boundary = c.face(lens).boundary().to_vec();
    let mut corners: Vec<VertexId> = boundary.iter().map(|&h| c.origin(h)).filter(|&v| !c.is_joint(v)).collect();
    corners.sort();
    if c.face(lens).side_count != 2 || corners.len() != 2 {
        return Err(Error::Precondition(format!("{lens} is not a 2-gon")));
    }
    let lens_edges: BTreeSet<EdgeId> = boundary.iter().map(|h| h.edge()).collect();
    let mut outer = Vec::new();
    for &v in &corners {
        let hs: Vec<HalfEdgeId> = c.outgoing(v).iter().copied().filter(|h| !lens_edges.contains(&h.edge())).collect();
        match hs.as_slice() {
            [h] => outer.push(*h),
            _ => return Err(Error::Precondition(format!("corner {v} of the 2-gon is not trivalent"))),
        }
    }
    let arcs: Vec<ArcSpec> = outer.iter().map(|&h| c.half_edge_arc(h)).collect();
    let scale = c.diameter();
    let mut wall = Wall::of(&arcs[0], &arcs[1], scale)?;
    if let Wall::Line { dir } = &mut wall {
        if (c.vertex(corners[0]) - c.vertex(corners[1])).dot(*dir) < 0.0 {
            *dir = -*dir;
        }
    }

    // The outer edge that shrinks leaves its corner in the direction of travel.
    let sign = displacement.signum();
    let shrinking =
        (0..2).find(|&i| arcs[i].start_tangent().dot(wall.velocity(arcs[i].start())) * sign > 0.0).unwrap_or(0);
    let alpha = outer[shrinking];
    let alpha_len = c.edge_arc(alpha.edge()).length();
    if displacement.abs() > alpha_len * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "displacement {displacement} exceeds the shrinking edge length {alpha_len}"
        )));
    }
    let moving: BTreeSet<usize> = boundary.iter().map(|&h| c.origin(h).0).collect();
    let mut s = Surgery::new(c);
    for &v in &moving {
        s.move_vertex(v, wall.apply(c.vertex(VertexId(v)), displacement));
    }
    let vanishes = displacement.abs() >= alpha_len * (1.0 - 1e-12) && displacement != 0.0;
    for (i, &h) in outer.iter().enumerate() {
        let e = h.edge();
        if vanishes && i == shrinking {
            let far = c.dest(alpha).0;
            s.remove_edge(e.0);
            s.merge_vertex(corners[i].0, far);
            continue;
        }
        let (from, to) = s.ends(e.0);
        let theta = wall.half_angle(s.point(from), s.point(to), c.edge(e).half_angle);
        s.set_half_angle(e.0, theta);
    }
    MoveReport::measure(c, s.finish()?)
}

enum Wall {
    Circle { center: Point, radius: f64 },
    Line { dir: Point },
}

impl Wall {
    fn of(a: &ArcSpec, b: &ArcSpec, scale: f64) -> Result<Wall> {
        let tol = 1e-9 * scale;
        let mismatch = || Error::Precondition("the outer edges of the 2-gon are not arcs of one circle".into());
        match (a.center(), b.center()) {
            (Some(ca), Some(cb)) if a.half_angle().abs() > 1e-9 && b.half_angle().abs() > 1e-9 => {
                if ca.dist(cb) > tol || (a.radius().abs() - b.radius().abs()).abs() > tol {
                    return Err(mismatch());
                }
                Ok(Wall::Circle { center: ca, radius: a.radius().abs() })
            }
            _ if a.is_straight() && b.is_straight() => {
                let d = a.chord_direction();
                for p in [b.start(), b.end()] {
                    if d.cross(p - a.start()).abs() > tol {
                        return Err(mismatch());
                    }
                }
                Ok(Wall::Line { dir: d })
            }
            _ => Err(mismatch()),
        }
    }

    /// Direction of positive travel at `p`.
    fn velocity(&self, p: Point) -> Point {
        match *self {
            Wall::Circle { center, .. } => (p - center).perp(),
            Wall::Line { dir } => dir,
        }
    }

    fn apply(&self, p: Point, d: f64) -> Point {
        match *self {
            Wall::Circle { center, radius } => center + (p - center).rotate(d / radius),
            Wall::Line { dir } => p + dir * d,
        }
    }

    /// Half-angle of the wall arc from `from` to `to` traveling as an edge with `old` did.
    fn half_angle(&self, from: Point, to: Point, old: f64) -> f64 {
        match *self {
            Wall::Circle { center, .. } => {
                let ccw = if old < 0.0 { 1.0 } else { -1.0 };
                let sweep = (ccw * ((to - center).angle() - (from - center).angle())).rem_euclid(2.0 * PI);
                -ccw * sweep / 2.0
            }
            Wall::Line { .. } => 0.0,
        }
    }
}

/// Reflects a 4-gon into an adjacent 3-gon across their shared side.
pub fn reflect_4gon_into_3gon(c: &BubbleComplex, fourgon: FaceId, threegon: FaceId) -> Result<MoveReport> {
    sides(c, fourgon, 4, "4-gon")?;
    sides(c, threegon, 3, "3-gon")?;
    let g = rotation_into(c, fourgon, threegon)?;
    reflect(c, fourgon, threegon, &g)
}

/// Builds a copy of a 5-gon inside an adjacent 3-gon.
pub fn reflect_5gon_into_3gon(c: &BubbleComplex, fivegon: FaceId, threegon: FaceId) -> Result<MoveReport> {
    sides(c, fivegon, 5, "5-gon")?;
    sides(c, threegon, 3, "3-gon")?;
    let g = rotation_into(c, fivegon, threegon)?;
    reflect(c, fivegon, threegon, &g)
}

/// Builds a mirror copy of a 5-gon inside the 4-gon across their shared edge.
pub fn reflect_5gon_into_4gon(c: &BubbleComplex, fivegon: FaceId, fourgon: FaceId) -> Result<MoveReport> {
    sides(c, fivegon, 5, "5-gon")?;
    sides(c, fourgon, 4, "4-gon")?;
    let g = mirror_across(c, fivegon, fourgon)?;
    reflect(c, fivegon, fourgon, &g)
}

/// Carves a copy of the smaller of two same-family n-gons into the larger one.
///
/// Adjacent 5-gons are mirrored across their shared side; 4-gons are moved
/// rigidly so that their exterior arcs coincide.
pub fn reflect_small_into_large(c: &BubbleComplex, small: FaceId, large: FaceId) -> Result<MoveReport> {
    interior(c, small)?;
    interior(c, large)?;
    let n = c.face(small).side_count;
    if !(n == 4 || n == 5) || c.face(large).side_count != n {
        return Err(Error::Precondition("both faces must be 4-gons or both 5-gons".into()));
    }
    let (hs, hl) = (exterior_arc(c, small)?, exterior_arc(c, large)?);
    let (as_, al) = (c.half_edge_arc(hs), c.half_edge_arc(hl));
    let scale = c.diameter();
    if (as_.curvature() - al.curvature()).abs() * scale > 1e-9 || (as_.chord() - al.chord()).abs() > 1e-9 * scale {
        return Err(Error::Precondition("the faces belong to different families".into()));
    }
    let (a_s, a_l) = (c.face_area(small)?, c.face_area(large)?);
    if (a_l - a_s).abs() <= 1e-9 * a_l.abs().max(1e-300) {
        return Err(Error::Precondition("the faces have equal size; swap them instead".into()));
    }
    if a_s > a_l {
        return Err(Error::Precondition(format!("{small} is larger than {large}")));
    }
    let g = if n == 5 {
        mirror_across(c, small, large)?
    } else {
        let turn = al.chord_direction().angle() - as_.chord_direction().angle();
        let (s0, l0) = (as_.start(), al.start());
        Isometry { map: Box::new(move |p| l0 + (p - s0).rotate(turn)), preserves_orientation: true }
    };
    reflect(c, small, large, &g)
}

struct Isometry {
    map: Box<dyn Fn(Point) -> Point>,
    preserves_orientation: bool,
}

/// Rotation about the inner end of the side shared by `source` and `target`
/// that carries that side onto the target's other side at the same vertex.
fn rotation_into(c: &BubbleComplex, source: FaceId, target: FaceId) -> Result<Isometry> {
    let beta = shared_edge(c, source, target)?;
    let edge = c.edge(beta);
    if edge.half_angle.abs() > 1e-12 {
        return Err(Error::Precondition("the shared side is not straight".into()));
    }
    let (p, q) = match (on_exterior(c, edge.from), on_exterior(c, edge.to)) {
        (false, true) => (edge.from, edge.to),
        (true, false) => (edge.to, edge.from),
        _ => return Err(Error::Precondition("the shared side must run from an inner vertex to the exterior".into())),
    };
    let other = c
        .face(target)
        .boundary()
        .iter()
        .copied()
        .find(|&h| h.edge() != beta && (c.origin(h) == p || c.dest(h) == p))
        .ok_or_else(|| Error::Precondition("the 3-gon has no second side at the shared vertex".into()))?;
    let e1 = if c.origin(other) == p { c.dest(other) } else { c.origin(other) };
    let (pp, qq, ee) = (c.vertex(p), c.vertex(q), c.vertex(e1));
    if (pp.dist(qq) - pp.dist(ee)).abs() > 1e-9 * c.diameter() {
        return Err(Error::Precondition("the target's sides at the shared vertex differ in length".into()));
    }
    let turn = (ee - pp).angle() - (qq - pp).angle();
    Ok(Isometry { map: Box::new(move |x| pp + (x - pp).rotate(turn)), preserves_orientation: true })
}

/// Reflection across the straight edge shared by two faces.
fn mirror_across(c: &BubbleComplex, source: FaceId, target: FaceId) -> Result<Isometry> {
    let sigma = shared_edge(c, source, target)?;
    let a = c.edge_arc(sigma);
    if !a.is_straight() {
        return Err(Error::Precondition("the shared edge is not straight".into()));
    }
    let (o, d) = (a.start(), a.chord_direction());
    Ok(Isometry {
        map: Box::new(move |p| {
            let r = p - o;
            o + d * (2.0 * r.dot(d)) - r
        }),
        preserves_orientation: false,
    })
}

/// The one curved edge a face shares with the exterior.
fn exterior_arc(c: &BubbleComplex, f: FaceId) -> Result<HalfEdgeId> {
    let arcs: Vec<HalfEdgeId> =
        c.shared_half_edges(f, c.exterior()).into_iter().filter(|&h| !c.half_edge_arc(h).is_straight()).collect();
    match arcs.as_slice() {
        [h] => Ok(*h),
        _ => Err(Error::Precondition(format!("{f} must meet the exterior along exactly one arc"))),
    }
}

/// Carves the image of `source` under `g` into `target`, gives the copy the
/// source's label and the source the target's label, then dissolves walls.
fn reflect(c: &BubbleComplex, source: FaceId, target: FaceId, g: &Isometry) -> Result<MoveReport> {
    if c.region_of(source) == c.region_of(target) {
        return Err(Error::Precondition("the faces belong to the same region".into()));
    }
    let scale = c.diameter();
    let tol = 1e-7 * scale;
    let mut s = Surgery::new(c);
    let mut target_edges: Vec<usize> = c.face(target).half_edges().map(|h| h.edge().0).collect();
    target_edges.dedup();

    let cycle = c.face(source).boundary().to_vec();
    let mut ids = Vec::with_capacity(cycle.len());
    for &h in &cycle {
        let p = (g.map)(c.vertex(c.origin(h)));
        let v = match s.find_vertex(p) {
            Some(v) => v,
            None => match target_edges.iter().copied().find(|&e| lies_on(&s.arc(e), p, tol)) {
                Some(e) => {
                    let v = s.split_at_point(e, p)?;
                    target_edges.push(s.edge_count() - 1);
                    v
                }
                None if c.winding(target, p) != 0 => s.vertex(p),
                None => return Err(Error::Precondition("the copy does not fit inside the target face".into())),
            },
        };
        ids.push(v);
    }

    let mut added = None;
    for (i, &h) in cycle.iter().enumerate() {
        let theta = c.half_edge_arc(h).half_angle();
        let theta = if g.preserves_orientation { theta } else { -theta };
        let (u, v) = (ids[i], ids[(i + 1) % ids.len()]);
        if s.find_edge(u, v, theta).is_some() {
            continue;
        }
        let arc = ArcSpec::new(s.point(u), s.point(v), theta)?;
        if c.winding(target, arc.point_at(0.5)) == 0 {
            return Err(Error::Precondition("the copy does not fit inside the target face".into()));
        }
        let e = s.add_edge(u, v, theta);
        added.get_or_insert(e);
    }
    let first = added.ok_or_else(|| Error::Precondition("the copy coincides with the target face".into()))?;
    let copy = s.new_key(c.region_of(source));
    s.set_face(first, g.preserves_orientation, copy)?;
    s.relabel(Surgery::key(source), c.region_of(target));
    MoveReport::measure(c, s.finish()?)
}

fn lies_on(a: &ArcSpec, p: Point, tol: f64) -> bool {
    let t = a.parameter_of(p);
    t > 1e-9 && t < 1.0 - 1e-9 && a.point_at(t).dist(p) <= tol
}

/// Exchanges the labels of two congruent faces and dissolves the walls that
/// now separate equal labels.
pub fn swap_regions(c: &BubbleComplex, f1: FaceId, f2: FaceId) -> Result<MoveReport> {
    interior(c, f1)?;
    interior(c, f2)?;
    let (r1, r2) = (c.region_of(f1), c.region_of(f2));
    if r1 == r2 {
        return Err(Error::Precondition("the faces already carry the same label".into()));
    }
    if !congruent(c, f1, f2) {
        return Err(Error::Precondition(format!("{f1} and {f2} are not congruent")));
    }
    let mut s = Surgery::new(c);
    s.relabel(Surgery::key(f1), r2);
    s.relabel(Surgery::key(f2), r1);
    let after = s.finish()?;
    if after.edges().len() == c.edges().len() && after.total_perimeter() >= c.total_perimeter() - MOVE_TOL {
        return Err(Error::Precondition("swapping the labels deletes no edge".into()));
    }
    MoveReport::measure(c, after)
}

/// Edge lengths, half-angles and corner angles in boundary order.
fn signature(c: &BubbleComplex, f: FaceId) -> Vec<[f64; 3]> {
    let b = c.face(f).boundary();
    (0..b.len())
        .map(|i| {
            let (a, next) = (c.half_edge_arc(b[i]), c.half_edge_arc(b[(i + 1) % b.len()]));
            let corner = a.end_tangent().cross(next.start_tangent()).atan2(a.end_tangent().dot(next.start_tangent()));
            [a.length(), a.half_angle(), corner]
        })
        .collect()
}

/// Equal up to rotation or reflection.
pub fn congruent(c: &BubbleComplex, f1: FaceId, f2: FaceId) -> bool {
    if c.face(f1).cycles.len() != 1 || c.face(f2).cycles.len() != 1 {
        return false;
    }
    let (s1, s2) = (signature(c, f1), signature(c, f2));
    let n = s1.len();
    if s2.len() != n {
        return false;
    }
    let tol = 1e-7 * c.diameter().max(1.0);
    // Reversed traversal of a mirror image: edges in reverse order, each
    // followed by the corner that used to precede it.
    let mirrored: Vec<[f64; 3]> = (0..n)
        .map(|k| {
            let e = s1[n - 1 - k];
            let corner = s1[(2 * n - 2 - k) % n][2];
            [e[0], e[1], corner]
        })
        .collect();
    let close = |a: &[f64; 3], b: &[f64; 3]| (0..3).all(|i| (a[i] - b[i]).abs() <= tol);
    [s1.clone(), mirrored].iter().any(|s| (0..n).any(|shift| (0..n).all(|i| close(&s[(i + shift) % n], &s2[i]))))
}

/// Removes one 3-gon's exterior arc and bulges another 3-gon of the same
/// region out to half-angle `theta` over the same chord.
pub fn pop_and_expand(c: &BubbleComplex, pop: FaceId, grow: FaceId, theta: f64) -> Result<MoveReport> {
    sides(c, pop, 3, "3-gon")?;
    sides(c, grow, 3, "3-gon")?;
    if pop == grow {
        return Err(Error::InvalidArgument("pop and grow must be different faces".into()));
    }
    if c.region_of(pop) != c.region_of(grow) {
        return Err(Error::Precondition("the two 3-gons belong to different regions".into()));
    }
    if !(theta > PI / 2.0 && theta < PI) {
        return Err(Error::InvalidArgument(format!("theta {theta} outside (pi/2, pi)")));
    }
    if exterior_curves(c, pop).len() != 1 {
        return Err(Error::Precondition(format!("{pop} must meet the exterior along one arc")));
    }
    let arc_h = exterior_arc(c, grow)?;
    let e = arc_h.edge();
    let old = c.edge(e).half_angle;
    let new_theta = old.signum() * theta;
    let grown = ArcSpec::new(c.vertex(c.edge(e).from), c.vertex(c.edge(e).to), new_theta)?;
    if crosses_complex(c, &grown, e) {
        return Err(Error::Precondition("the expanded arc would intersect the complex".into()));
    }
    let mut s = Surgery::new(c);
    s.relabel(Surgery::key(pop), RegionLabel::EXTERIOR);
    s.set_half_angle(e.0, new_theta);
    MoveReport::measure(c, s.finish()?)
}

/// Whether `arc` (replacing edge `skip`) meets any other edge away from its endpoints.
fn crosses_complex(c: &BubbleComplex, arc: &ArcSpec, skip: EdgeId) -> bool {
    let ours: Vec<Point> = (0..=256).map(|i| arc.point_at(0.005 + 0.99 * i as f64 / 256.0)).collect();
    c.edge_ids().filter(|&e| e != skip).any(|e| {
        let theirs = c.edge_arc(e).sample(64);
        ours.windows(2).any(|a| theirs.windows(2).any(|b| segments_cross(a[0], a[1], b[0], b[1])))
    })
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// The root of `theta = pi sin(theta)` in `(pi/2, pi)`, where expanding one
/// 3-gon exactly pays for popping another.
pub fn pop_balance_angle() -> f64 {
    let f = |t: f64| t - PI * t.sin();
    let (mut lo, mut hi) = (PI / 2.0, PI - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// 4-gons and 5-gons meeting the exterior along two or more curves.
pub fn detect_double_exterior(c: &BubbleComplex) -> Vec<FaceId> {
    c.interior_faces()
        .filter(|f| matches!(f.side_count, 4 | 5) && exterior_curves(c, f.id).len() >= 2)
        .map(|f| f.id)
        .collect()
}
