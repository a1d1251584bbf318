//! Bubble complexes: planar subdivisions with circular-arc edges.
//!
//! Every undirected edge `e` owns two half-edges, `2e` running `from → to`
//! with the edge's half-angle and `2e + 1` running back with the negated
//! half-angle. Each half-edge has its face on the left, so interior
//! boundaries run counterclockwise and the exterior face (always
//! `FaceId(0)`) is traversed clockwise.
//!
//! A full circle cannot be a single edge (its chord would vanish), so it is
//! stored as arcs joined at degree-2 vertices. Such a vertex is a *smooth
//! joint* when the curve passes through it without a kink and without a
//! change of curvature; joints are not corners, and maximal chains of edges
//! through joints form one *curve*.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arc::{self, ArcSpec, Point};
use crate::error::{Error, Result};

/// Tangent mismatch (radians) below which a degree-2 vertex is a smooth joint.
pub const JOINT_TOL: f64 = 1e-6;

/// Which enclosed area a face contributes to. `0` is the exterior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionLabel(u32);

impl RegionLabel {
    pub const EXTERIOR: RegionLabel = RegionLabel(0);
    /// A chamber that belongs to none of the enclosed areas.
    pub const EMPTY: RegionLabel = RegionLabel(u32::MAX);

    pub const fn new(value: u32) -> Self {
        RegionLabel(value)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_exterior(self) -> bool {
        self == Self::EXTERIOR
    }

    pub fn is_empty_chamber(self) -> bool {
        self == Self::EMPTY
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty_chamber() {
            f.write_str("empty")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for RegionLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_empty_chamber() {
            s.serialize_str("empty")
        } else {
            s.serialize_u32(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for RegionLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) if n != u32::MAX => Ok(RegionLabel(n)),
            Raw::Text(t) if t == "empty" => Ok(RegionLabel::EMPTY),
            _ => Err(serde::de::Error::custom("region label must be a non-negative integer or \"empty\"")),
        }
    }
}

macro_rules! index_type {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub struct $name(pub usize);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

index_type!(VertexId);
index_type!(EdgeId);
index_type!(HalfEdgeId);
index_type!(FaceId);

impl EdgeId {
    /// The half-edge running `from → to`.
    pub fn forward(self) -> HalfEdgeId {
        HalfEdgeId(2 * self.0)
    }

    pub fn backward(self) -> HalfEdgeId {
        HalfEdgeId(2 * self.0 + 1)
    }
}

impl HalfEdgeId {
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 / 2)
    }

    pub fn twin(self) -> HalfEdgeId {
        HalfEdgeId(self.0 ^ 1)
    }

    pub fn is_forward(self) -> bool {
        self.0 % 2 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub half_angle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub origin: VertexId,
    pub twin: HalfEdgeId,
    pub next: HalfEdgeId,
    pub prev: HalfEdgeId,
    pub face: FaceId,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub id: FaceId,
    pub region: RegionLabel,
    /// Boundary cycles; interior faces have exactly one.
    pub cycles: Vec<Vec<HalfEdgeId>>,
    /// Number of curves bounding the face (an `n`-gon has `n`).
    pub side_count: usize,
}

impl Face {
    /// The boundary cycle of an interior face.
    pub fn boundary(&self) -> &[HalfEdgeId] {
        &self.cycles[0]
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdgeId> + '_ {
        self.cycles.iter().flatten().copied()
    }
}

/// Dual graph: one node per face and one edge per curve of the complex.
#[derive(Clone, Debug, PartialEq)]
pub struct DualGraph {
    pub nodes: Vec<FaceId>,
    pub edges: Vec<DualEdge>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualEdge {
    /// Face on the left of `edge`.
    pub a: FaceId,
    /// Face on the right of `edge`.
    pub b: FaceId,
    /// Representative primal edge of the separating curve.
    pub edge: EdgeId,
    /// All primal edges of the curve.
    pub edges: Vec<EdgeId>,
    /// Signed curvature picked up when crossing from `a` to `b`.
    pub curvature: f64,
}

impl DualGraph {
    pub fn neighbors(&self, f: FaceId) -> impl Iterator<Item = (FaceId, f64)> + '_ {
        self.edges.iter().filter_map(move |d| {
            if d.a == f {
                Some((d.b, d.curvature))
            } else if d.b == f {
                Some((d.a, -d.curvature))
            } else {
                None
            }
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return true;
        }
        let mut uf = UnionFind::new(n);
        for d in &self.edges {
            uf.union(d.a.0, d.b.0);
        }
        (1..n).all(|i| uf.find(i) == uf.find(0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BubbleComplex {
    vertices: Vec<Point>,
    edges: Vec<Edge>,
    half_edges: Vec<HalfEdge>,
    faces: Vec<Face>,
    outgoing: Vec<Vec<HalfEdgeId>>,
    joints: Vec<bool>,
    curve_of: Vec<usize>,
    curve_count: usize,
}

impl Default for BubbleComplex {
    fn default() -> Self {
        Self::empty()
    }
}

impl BubbleComplex {
    /// The complex with no edges: the whole plane is exterior.
    pub fn empty() -> Self {
        ComplexBuilder::new().build().expect("empty complex is valid")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> Point {
        self.vertices[v.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn half_edge(&self, h: HalfEdgeId) -> &HalfEdge {
        &self.half_edges[h.0]
    }

    pub fn half_edge_count(&self) -> usize {
        self.half_edges.len()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0]
    }

    pub fn exterior(&self) -> FaceId {
        FaceId(0)
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter().skip(1)
    }

    pub fn region_of(&self, f: FaceId) -> RegionLabel {
        self.faces[f.0].region
    }

    pub fn edge_arc(&self, e: EdgeId) -> ArcSpec {
        let ed = &self.edges[e.0];
        ArcSpec::new(self.vertices[ed.from.0], self.vertices[ed.to.0], ed.half_angle).expect("validated at build")
    }

    /// The arc traversed by a half-edge, with its face on the left.
    pub fn half_edge_arc(&self, h: HalfEdgeId) -> ArcSpec {
        let a = self.edge_arc(h.edge());
        if h.is_forward() {
            a
        } else {
            a.reversed()
        }
    }

    pub fn origin(&self, h: HalfEdgeId) -> VertexId {
        self.half_edges[h.0].origin
    }

    pub fn dest(&self, h: HalfEdgeId) -> VertexId {
        self.half_edges[h.twin().0].origin
    }

    /// Signed curvature of a half-edge; crossing it from its face to the twin's
    /// face raises the pressure by this amount.
    pub fn curvature(&self, h: HalfEdgeId) -> f64 {
        self.half_edge_arc(h).curvature()
    }

    /// Outgoing half-edges of `v` in counterclockwise order of their tangents.
    pub fn outgoing(&self, v: VertexId) -> &[HalfEdgeId] {
        &self.outgoing[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.outgoing[v.0].len()
    }

    /// Whether `v` is a smooth degree-2 joint inside a single curve.
    pub fn is_joint(&self, v: VertexId) -> bool {
        self.joints[v.0]
    }

    /// Vertices that are genuine corners of the subdivision.
    pub fn corner_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId).filter(|&v| !self.joints[v.0])
    }

    /// Index of the curve an edge belongs to.
    pub fn curve_of(&self, e: EdgeId) -> usize {
        self.curve_of[e.0]
    }

    pub fn curve_count(&self) -> usize {
        self.curve_count
    }

    /// Edges of each curve, indexed by curve.
    pub fn curves(&self) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new(); self.curve_count];
        for e in self.edge_ids() {
            out[self.curve_of[e.0]].push(e);
        }
        out
    }

    pub fn regions(&self) -> BTreeMap<RegionLabel, Vec<FaceId>> {
        let mut map: BTreeMap<RegionLabel, Vec<FaceId>> = BTreeMap::new();
        for f in self.interior_faces() {
            map.entry(f.region).or_default().push(f.id);
        }
        map
    }

    /// Labels of enclosed areas, excluding empty chambers.
    pub fn region_labels(&self) -> Vec<RegionLabel> {
        self.regions().into_keys().filter(|r| !r.is_empty_chamber()).collect()
    }

    /// Faces adjacent to `f` together with the separating edge, one entry per edge.
    pub fn neighbors(&self, f: FaceId) -> Vec<(FaceId, EdgeId)> {
        self.faces[f.0].half_edges().map(|h| (self.half_edges[h.twin().0].face, h.edge())).collect()
    }

    /// Edges separating faces `f` and `g`.
    pub fn shared_edges(&self, f: FaceId, g: FaceId) -> Vec<EdgeId> {
        self.neighbors(f).into_iter().filter(|&(n, _)| n == g).map(|(_, e)| e).collect()
    }

    /// Half-edges of `f`'s boundary whose twin lies in `g`.
    pub fn shared_half_edges(&self, f: FaceId, g: FaceId) -> Vec<HalfEdgeId> {
        self.faces[f.0].half_edges().filter(|h| self.half_edges[h.twin().0].face == g).collect()
    }

    /// Signed area enclosed by one boundary cycle (positive when counterclockwise).
    pub fn cycle_area(&self, cycle: &[HalfEdgeId]) -> f64 {
        cycle
            .iter()
            .map(|&h| {
                let a = self.half_edge_arc(h);
                0.5 * a.start().cross(a.end()) - a.segment_area()
            })
            .sum()
    }

    /// Signed area of any face; the exterior face comes out negative.
    pub fn signed_face_area(&self, f: FaceId) -> f64 {
        self.faces[f.0].cycles.iter().map(|c| self.cycle_area(c)).sum()
    }

    pub fn face_area(&self, f: FaceId) -> Result<f64> {
        if f.0 >= self.faces.len() {
            return Err(Error::InvalidArgument(format!("no face {f}")));
        }
        if f == self.exterior() {
            return Err(Error::InvalidArgument("the exterior face has infinite area".into()));
        }
        Ok(self.signed_face_area(f))
    }

    pub fn region_area(&self, r: RegionLabel) -> Result<f64> {
        if r.is_exterior() {
            return Err(Error::InvalidArgument("the exterior region has infinite area".into()));
        }
        let faces = self.regions().remove(&r).ok_or_else(|| Error::InvalidArgument(format!("unknown region {r}")))?;
        Ok(faces.iter().map(|&f| self.signed_face_area(f)).sum())
    }

    /// Areas of all enclosed regions (empty chambers excluded).
    pub fn region_areas(&self) -> BTreeMap<RegionLabel, f64> {
        let mut out = BTreeMap::new();
        for f in self.interior_faces() {
            if !f.region.is_empty_chamber() {
                *out.entry(f.region).or_insert(0.0) += self.signed_face_area(f.id);
            }
        }
        out
    }

    pub fn total_perimeter(&self) -> f64 {
        self.edge_ids().map(|e| self.edge_arc(e).length()).sum()
    }

    /// Axis-aligned bounds including arc bulges, or `None` when there are no edges.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let mut it = self.edge_ids().map(|e| self.edge_arc(e).bounds());
        let first = it.next()?;
        Some(it.fold(first, |(lo, hi), (l, h)| {
            (Point::new(lo.x.min(l.x), lo.y.min(l.y)), Point::new(hi.x.max(h.x), hi.y.max(h.y)))
        }))
    }

    /// Diagonal of the bounding box; 1 for an empty complex.
    pub fn diameter(&self) -> f64 {
        match self.bounds() {
            Some((lo, hi)) => lo.dist(hi),
            None => 1.0,
        }
    }

    /// Polyline approximating one boundary cycle, `per_edge` segments per edge.
    pub fn cycle_polyline(&self, cycle: &[HalfEdgeId], per_edge: usize) -> Vec<Point> {
        let mut pts = Vec::with_capacity(cycle.len() * per_edge);
        for &h in cycle {
            let a = self.half_edge_arc(h);
            pts.extend((0..per_edge).map(|i| a.point_at(i as f64 / per_edge as f64)));
        }
        pts
    }

    /// Winding number of a face's boundary around `p`.
    pub fn winding(&self, f: FaceId, p: Point) -> i32 {
        self.faces[f.0].cycles.iter().map(|c| winding_number(&self.cycle_polyline(c, 64), p)).sum()
    }

    /// The face containing `p` (the exterior if no interior face does).
    pub fn locate(&self, p: Point) -> FaceId {
        self.interior_faces().find(|f| self.winding(f.id, p) != 0).map_or(FaceId(0), |f| f.id)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Number of connected components of the edge graph.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.from.0, e.to.0);
        }
        (0..self.vertices.len()).filter(|&v| uf.find(v) == v).count()
    }

    pub fn dual_adjacency(&self) -> DualGraph {
        let nodes = self.faces.iter().map(|f| f.id).collect();
        let edges = self
            .curves()
            .into_iter()
            .map(|edges| {
                let e = edges[0];
                let h = e.forward();
                DualEdge {
                    a: self.half_edges[h.0].face,
                    b: self.half_edges[h.twin().0].face,
                    edge: e,
                    curvature: self.curvature(h),
                    edges,
                }
            })
            .collect();
        DualGraph { nodes, edges }
    }

    /// Uniform scaling about the origin; half-angles are unchanged.
    pub fn rescale(&self, factor: f64) -> Result<BubbleComplex> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!("scale factor must be positive, got {factor}")));
        }
        self.map_points(|p| p * factor)
    }

    /// Applies an orientation-preserving similarity to every vertex.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<BubbleComplex> {
        let mut b = self.to_builder();
        for p in &mut b.vertices {
            *p = f(*p);
        }
        b.build()
    }

    /// Mirror image across the x axis.
    pub fn mirrored(&self) -> Result<BubbleComplex> {
        let mut b = self.to_builder();
        for p in &mut b.vertices {
            p.y = -p.y;
        }
        for e in &mut b.edges {
            e.half_angle = -e.half_angle;
            std::mem::swap(&mut e.left, &mut e.right);
        }
        b.build()
    }

    /// Adds one circle per entry, placed along a diagonal ray away from the
    /// existing complex and from each other.
    pub fn add_disjoint_circles(&self, extras: &BTreeMap<RegionLabel, f64>) -> Result<BubbleComplex> {
        let mut b = self.to_builder();
        let corner = self.bounds().map(|(_, hi)| hi).unwrap_or(Point::ORIGIN);
        let dir = Point::new(1.0, 1.0).unit();
        let mut next_key = b.labels.keys().next_back().map_or(1, |k| k + 1);
        let mut offset = 0.0;
        for (&label, &area) in extras {
            if !(area > 0.0) || !area.is_finite() {
                return Err(Error::InvalidArgument(format!("circle area must be positive, got {area}")));
            }
            if label.is_exterior() {
                return Err(Error::InvalidArgument("cannot add a circle to the exterior".into()));
            }
            let r = (area / PI).sqrt();
            let gap = r.max(1e-3);
            let center = corner + dir * (offset + gap + r);
            offset += gap + 2.0 * r;
            let key = next_key;
            next_key += 1;
            b.face(key, label);
            b.circle(center, r, 2, key, None);
        }
        b.build()
    }

    /// Fuses consecutive co-circular edges through smooth joints into single
    /// arcs, as long as the result stays below a full turn and is not a loop.
    pub fn merge_joints(&self) -> Result<BubbleComplex> {
        let mut b = self.to_builder();
        let mut alive = vec![true; b.edges.len()];
        for v in 0..self.vertices.len() {
            if !self.joints[v] {
                continue;
            }
            let inc: Vec<usize> =
                (0..b.edges.len()).filter(|&e| alive[e] && (b.edges[e].from == v || b.edges[e].to == v)).collect();
            if inc.len() != 2 {
                continue;
            }
            let mut e1 = b.edges[inc[0]].clone();
            if e1.to != v {
                e1 = flip(&e1);
            }
            let mut e2 = b.edges[inc[1]].clone();
            if e2.from != v {
                e2 = flip(&e2);
            }
            let theta = e1.half_angle + e2.half_angle;
            if e1.from == e2.to || theta.abs() >= PI - 1e-9 {
                continue;
            }
            alive[inc[1]] = false;
            b.edges[inc[0]] = DraftEdge { from: e1.from, to: e2.to, half_angle: theta, left: e1.left, right: e1.right };
        }
        let mut out = ComplexBuilder { vertices: Vec::new(), edges: Vec::new(), labels: b.labels.clone() };
        let mut remap = vec![usize::MAX; b.vertices.len()];
        for (e, d) in b.edges.iter().enumerate() {
            if !alive[e] {
                continue;
            }
            let mut d = d.clone();
            for end in [&mut d.from, &mut d.to] {
                if remap[*end] == usize::MAX {
                    remap[*end] = out.vertex(b.vertices[*end]);
                }
                *end = remap[*end];
            }
            out.edges.push(d);
        }
        out.build()
    }

    /// A builder reproducing this complex, with face ids as face keys.
    pub fn to_builder(&self) -> ComplexBuilder {
        let mut b = ComplexBuilder::new();
        b.vertices = self.vertices.clone();
        for f in &self.faces {
            b.labels.insert(f.id.0 as u64, f.region);
        }
        for (i, e) in self.edges.iter().enumerate() {
            let id = EdgeId(i);
            b.edges.push(DraftEdge {
                from: e.from.0,
                to: e.to.0,
                half_angle: e.half_angle,
                left: Some(self.half_edges[id.forward().0].face.0 as u64),
                right: Some(self.half_edges[id.backward().0].face.0 as u64),
            });
        }
        b
    }
}

/// Winding number of a closed polyline around `p`.
pub fn winding_number(poly: &[Point], p: Point) -> i32 {
    let mut w = 0;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let side = (b - a).cross(p - a);
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            w -= 1;
        }
    }
    w
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct DraftEdge {
    pub from: usize,
    pub to: usize,
    pub half_angle: f64,
    pub left: Option<u64>,
    pub right: Option<u64>,
}

pub(crate) fn flip(e: &DraftEdge) -> DraftEdge {
    DraftEdge { from: e.to, to: e.from, half_angle: -e.half_angle, left: e.right, right: e.left }
}

/// Assembles a [`BubbleComplex`] from vertices, edges and face keys.
///
/// Faces are discovered from the geometry. A face key names the face on one
/// side of an edge; every key used on a boundary cycle must agree, and each
/// key maps to a region label. Cycles that carry no key and enclose negative
/// area are taken to be exterior.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexBuilder {
    pub(crate) vertices: Vec<Point>,
    pub(crate) edges: Vec<DraftEdge>,
    pub(crate) labels: BTreeMap<u64, RegionLabel>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, p: Point) -> usize {
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Declares a face key and the region it belongs to.
    pub fn face(&mut self, key: u64, region: RegionLabel) -> &mut Self {
        self.labels.insert(key, region);
        self
    }

    pub fn edge(&mut self, from: usize, to: usize, half_angle: f64) -> usize {
        self.edges.push(DraftEdge { from, to, half_angle, left: None, right: None });
        self.edges.len() - 1
    }

    /// Adds an edge with the faces on both sides named.
    pub fn edge_between(&mut self, from: usize, to: usize, half_angle: f64, left: u64, right: u64) -> usize {
        self.edges.push(DraftEdge { from, to, half_angle, left: Some(left), right: Some(right) });
        self.edges.len() - 1
    }

    pub fn set_left(&mut self, edge: usize, key: u64) -> &mut Self {
        self.edges[edge].left = Some(key);
        self
    }

    pub fn set_right(&mut self, edge: usize, key: u64) -> &mut Self {
        self.edges[edge].right = Some(key);
        self
    }

    /// Adds a counterclockwise circle split into `pieces` arcs, with face
    /// `inside` on its left and optionally `outside` on its right.
    pub fn circle(&mut self, center: Point, r: f64, pieces: usize, inside: u64, outside: Option<u64>) -> Vec<usize> {
        let n = pieces.max(2);
        let ids: Vec<usize> =
            (0..n).map(|k| self.vertex(center + Point::polar(2.0 * PI * k as f64 / n as f64) * r)).collect();
        let theta = -PI / n as f64;
        (0..n)
            .map(|k| {
                let e = self.edge(ids[k], ids[(k + 1) % n], theta);
                self.edges[e].left = Some(inside);
                self.edges[e].right = outside;
                e
            })
            .collect()
    }

    pub fn build(&self) -> Result<BubbleComplex> {
        build(self)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidComplex(msg.into())
}

pub(crate) struct Topology {
    pub arcs: Vec<ArcSpec>,
    pub outgoing: Vec<Vec<usize>>,
    pub next: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
    pub cycle_of: Vec<usize>,
}

/// Geometric face structure of a draft, ignoring face keys.
pub(crate) fn trace(b: &ComplexBuilder) -> Result<Topology> {
    let nv = b.vertices.len();
    if b.vertices.iter().any(|p| !p.is_finite()) {
        return Err(invalid("vertex coordinates must be finite"));
    }
    let mut arcs = Vec::with_capacity(b.edges.len());
    for (i, e) in b.edges.iter().enumerate() {
        if e.from >= nv || e.to >= nv {
            return Err(invalid(format!("edge {i} refers to a missing vertex")));
        }
        if e.from == e.to {
            return Err(invalid(format!("edge {i} is a loop")));
        }
        let a = ArcSpec::new(b.vertices[e.from], b.vertices[e.to], e.half_angle)
            .map_err(|err| invalid(format!("edge {i}: {err}")))?;
        arcs.push(a);
    }

    let nh = 2 * arcs.len();
    let harc = |h: usize| if h % 2 == 0 { arcs[h / 2] } else { arcs[h / 2].reversed() };
    let origin = |h: usize| if h % 2 == 0 { b.edges[h / 2].from } else { b.edges[h / 2].to };

    // Counterclockwise order of outgoing half-edges; ties in tangent are
    // broken by curvature, the curve turning further left coming later.
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for h in 0..nh {
        outgoing[origin(h)].push(h);
    }
    let key_of = |h: usize| {
        let a = harc(h);
        let mut ang = a.start_tangent().angle();
        if ang > PI - 1e-12 {
            ang -= 2.0 * PI;
        }
        (ang, -a.curvature(), h)
    };
    for out in &mut outgoing {
        let mut keyed: Vec<(f64, f64, usize)> = out.iter().map(|&h| key_of(h)).collect();
        keyed.sort_by(|x, y| {
            if (x.0 - y.0).abs() > 1e-12 {
                x.0.total_cmp(&y.0)
            } else {
                x.1.total_cmp(&y.1).then(x.2.cmp(&y.2))
            }
        });
        for w in keyed.windows(2) {
            if (w[0].0 - w[1].0).abs() <= 1e-12 && (w[0].1 - w[1].1).abs() <= 1e-12 {
                return Err(invalid(format!("edges {} and {} overlap", w[0].2 / 2, w[1].2 / 2)));
            }
        }
        *out = keyed.into_iter().map(|k| k.2).collect();
    }
    let mut pos = vec![0usize; nh];
    for out in &outgoing {
        for (i, &h) in out.iter().enumerate() {
            pos[h] = i;
        }
    }
    let mut next = vec![0usize; nh];
    for h in 0..nh {
        let t = h ^ 1;
        let out = &outgoing[origin(t)];
        next[h] = out[(pos[t] + out.len() - 1) % out.len()];
    }

    let mut cycle_of = vec![usize::MAX; nh];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..nh {
        if cycle_of[start] != usize::MAX {
            continue;
        }
        let mut cyc = Vec::new();
        let mut h = start;
        loop {
            cycle_of[h] = cycles.len();
            cyc.push(h);
            h = next[h];
            if h == start {
                break;
            }
            if cyc.len() > nh {
                return Err(invalid("boundary traversal does not close"));
            }
        }
        cycles.push(cyc);
    }
    Ok(Topology { arcs, outgoing, next, cycles, cycle_of })
}

fn build(b: &ComplexBuilder) -> Result<BubbleComplex> {
    let nv = b.vertices.len();
    let topo = trace(b)?;
    let mut degree = vec![0usize; nv];
    for e in &b.edges {
        degree[e.from] += 1;
        degree[e.to] += 1;
    }
    if let Some(v) = degree.iter().position(|&d| d == 0) {
        return Err(invalid(format!("vertex {v} has no edges")));
    }
    for e in &b.edges {
        for key in [e.left, e.right].into_iter().flatten() {
            if !b.labels.contains_key(&key) {
                return Err(invalid(format!("face key {key} is not declared")));
            }
        }
    }
    let Topology { arcs, outgoing, next, cycles, cycle_of } = topo;
    let nh = 2 * arcs.len();
    let harc = |h: usize| if h % 2 == 0 { arcs[h / 2] } else { arcs[h / 2].reversed() };
    let origin = |h: usize| if h % 2 == 0 { b.edges[h / 2].from } else { b.edges[h / 2].to };

    let half_key = |h: usize| if h % 2 == 0 { b.edges[h / 2].left } else { b.edges[h / 2].right };

    let mut faces = vec![Face { id: FaceId(0), region: RegionLabel::EXTERIOR, cycles: Vec::new(), side_count: 0 }];
    let mut face_of_cycle = vec![0usize; cycles.len()];
    for (ci, cyc) in cycles.iter().enumerate() {
        let mut key = None;
        for &h in cyc {
            if let Some(k) = half_key(h) {
                match key {
                    None => key = Some(k),
                    Some(prev) if prev != k => {
                        return Err(invalid(format!("face keys {prev} and {k} name the same face (edge {})", h / 2)))
                    }
                    _ => {}
                }
            }
        }
        let area: f64 = cyc
            .iter()
            .map(|&h| {
                let a = harc(h);
                0.5 * a.start().cross(a.end()) - a.segment_area()
            })
            .sum();
        let label = key.map(|k| b.labels[&k]);
        let hs = cyc.iter().map(|&h| HalfEdgeId(h)).collect::<Vec<_>>();
        if area > 0.0 {
            match label {
                None => return Err(invalid(format!("bounded face around edge {} has no key", cyc[0] / 2))),
                Some(l) if l.is_exterior() => {
                    return Err(invalid(format!("bounded face around edge {} is labelled exterior", cyc[0] / 2)))
                }
                Some(l) => {
                    face_of_cycle[ci] = faces.len();
                    faces.push(Face { id: FaceId(faces.len()), region: l, cycles: vec![hs], side_count: 0 });
                }
            }
        } else {
            match label {
                Some(l) if !l.is_exterior() => {
                    return Err(invalid(format!("face with region {l} has a hole (edge {})", cyc[0] / 2)))
                }
                _ => {
                    face_of_cycle[ci] = 0;
                    faces[0].cycles.push(hs);
                }
            }
        }
    }

    let mut half_edges = Vec::with_capacity(nh);
    for h in 0..nh {
        half_edges.push(HalfEdge {
            origin: VertexId(origin(h)),
            twin: HalfEdgeId(h ^ 1),
            next: HalfEdgeId(next[h]),
            prev: HalfEdgeId(0),
            face: FaceId(face_of_cycle[cycle_of[h]]),
            edge: EdgeId(h / 2),
        });
    }
    for h in 0..nh {
        half_edges[next[h]].prev = HalfEdgeId(h);
    }

    // Smooth joints and curves.
    let mut joints = vec![false; nv];
    let scale = {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &b.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if nv == 0 {
            1.0
        } else {
            lo.dist(hi).max(f64::MIN_POSITIVE)
        }
    };
    let mut uf = UnionFind::new(arcs.len());
    for v in 0..nv {
        let out = &outgoing[v];
        if out.len() != 2 {
            continue;
        }
        let (h1, h2) = (out[0], out[1]);
        if h1 / 2 == h2 / 2 {
            continue;
        }
        let (a1, a2) = (harc(h1), harc(h2));
        let kink = arc::wrap_angle(a2.start_tangent().angle() - a1.start_tangent().angle() - PI).abs();
        let dk = (a1.curvature() + a2.curvature()).abs() * scale;
        if kink <= JOINT_TOL && dk <= JOINT_TOL {
            joints[v] = true;
            uf.union(h1 / 2, h2 / 2);
        }
    }
    let mut curve_index = BTreeMap::new();
    let mut curve_of = vec![0usize; arcs.len()];
    for e in 0..arcs.len() {
        let root = uf.find(e);
        let next_index = curve_index.len();
        curve_of[e] = *curve_index.entry(root).or_insert(next_index);
    }
    for f in &mut faces {
        f.side_count = f.cycles.iter().map(|c| c.iter().filter(|h| !joints[origin(h.0)]).count().max(1)).sum();
    }

    Ok(BubbleComplex {
        vertices: b.vertices.clone(),
        edges: b
            .edges
            .iter()
            .map(|e| Edge { from: VertexId(e.from), to: VertexId(e.to), half_angle: e.half_angle })
            .collect(),
        half_edges,
        faces,
        outgoing: outgoing.into_iter().map(|o| o.into_iter().map(HalfEdgeId).collect()).collect(),
        joints,
        curve_of,
        curve_count: curve_index.len(),
    })
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle() -> BubbleComplex {
        let mut b = ComplexBuilder::new();
        b.face(1, RegionLabel::new(1));
        b.circle(Point::ORIGIN, 1.0, 2, 1, None);
        b.build().unwrap()
    }

    fn unit_square() -> BubbleComplex {
        let mut b = ComplexBuilder::new();
        b.face(1, RegionLabel::new(1));
        let v: Vec<usize> =
            [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].iter().map(|&(x, y)| b.vertex(Point::new(x, y))).collect();
        for k in 0..4 {
            let e = b.edge(v[k], v[(k + 1) % 4], 0.0);
            b.set_left(e, 1);
        }
        b.build().unwrap()
    }

    #[test]
    fn circle_is_a_one_gon() {
        let c = unit_circle();
        assert_eq!(c.faces().len(), 2);
        let f = &c.faces()[1];
        assert_eq!(f.side_count, 1);
        assert!((c.face_area(f.id).unwrap() - PI).abs() < 1e-14);
        assert!((c.total_perimeter() - 2.0 * PI).abs() < 1e-14);
        assert!(c.is_joint(VertexId(0)) && c.is_joint(VertexId(1)));
        assert_eq!(c.curve_count(), 1);
        assert_eq!(c.dual_adjacency().edges.len(), 1);
        assert_eq!(c.euler_characteristic(), 2);
    }

    #[test]
    fn square_faces_and_orientation() {
        let c = unit_square();
        assert_eq!(c.face(FaceId(1)).side_count, 4);
        assert!((c.face_area(FaceId(1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((c.signed_face_area(FaceId(0)) + 1.0).abs() < 1e-15);
        assert!(c.face_area(FaceId(0)).is_err());
        let h = c.face(FaceId(1)).boundary()[0];
        assert_eq!(c.half_edge(c.half_edge(h).next).prev, h);
    }

    #[test]
    fn region_label_serde() {
        assert_eq!(serde_json::to_string(&RegionLabel::EMPTY).unwrap(), "\"empty\"");
        assert_eq!(serde_json::to_string(&RegionLabel::new(3)).unwrap(), "3");
        let l: RegionLabel = serde_json::from_str("\"empty\"").unwrap();
        assert!(l.is_empty_chamber());
        assert!(serde_json::from_str::<RegionLabel>("\"bogus\"").is_err());
        assert!(serde_json::from_str::<RegionLabel>("-1").is_err());
    }

    #[test]
    fn inconsistent_keys_are_rejected() {
        let mut b = ComplexBuilder::new();
        b.face(1, RegionLabel::new(1)).face(2, RegionLabel::new(2));
        let v: Vec<usize> =
            [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)].iter().map(|&(x, y)| b.vertex(Point::new(x, y))).collect();
        b.edge_between(v[0], v[1], 0.0, 1, 0);
        b.edge_between(v[1], v[2], 0.0, 2, 0);
        b.face(0, RegionLabel::EXTERIOR);
        b.edge_between(v[2], v[0], 0.0, 1, 0);
        assert!(matches!(b.build(), Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn unlabelled_bounded_face_is_rejected() {
        let mut b = ComplexBuilder::new();
        let v: Vec<usize> =
            [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)].iter().map(|&(x, y)| b.vertex(Point::new(x, y))).collect();
        for k in 0..3 {
            b.edge(v[k], v[(k + 1) % 3], 0.0);
        }
        assert!(b.build().is_err());
    }

    #[test]
    fn hole_in_interior_face_is_rejected() {
        let mut b = ComplexBuilder::new();
        b.face(1, RegionLabel::new(1));
        b.circle(Point::ORIGIN, 2.0, 2, 1, None);
        b.circle(Point::ORIGIN, 1.0, 2, 0, Some(1));
        b.face(0, RegionLabel::EXTERIOR);
        assert!(b.build().is_err());
    }

    #[test]
    fn disjoint_circles_merge_exteriors() {
        let c = unit_circle();
        let extras = BTreeMap::from([(RegionLabel::new(2), 0.25)]);
        let d = c.add_disjoint_circles(&extras).unwrap();
        assert_eq!(d.faces().len(), 3);
        assert_eq!(d.face(FaceId(0)).cycles.len(), 2);
        assert!((d.total_perimeter() - c.total_perimeter() - PI.sqrt()).abs() < 1e-12);
        assert!((d.region_area(RegionLabel::new(2)).unwrap() - 0.25).abs() < 1e-14);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.euler_characteristic(), 3);
    }

    #[test]
    fn mirror_preserves_measurements() {
        let c = unit_square();
        let m = c.mirrored().unwrap();
        assert!((m.face_area(FaceId(1)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tangent_circles_share_a_four_valent_vertex() {
        let mut b = ComplexBuilder::new();
        b.face(1, RegionLabel::new(1)).face(2, RegionLabel::new(2));
        let o = b.vertex(Point::ORIGIN);
        let l = b.vertex(Point::new(-2.0, 0.0));
        let r = b.vertex(Point::new(2.0, 0.0));
        for (a, c, k) in [(o, l, 1), (l, o, 1), (r, o, 2), (o, r, 2)] {
            let e = b.edge(a, c, -PI / 2.0);
            b.set_left(e, k);
        }
        let c = b.build().unwrap();
        assert_eq!(c.degree(VertexId(0)), 4);
        assert_eq!(c.faces().len(), 3);
        assert!((c.region_area(RegionLabel::new(1)).unwrap() - PI).abs() < 1e-14);
    }
}
