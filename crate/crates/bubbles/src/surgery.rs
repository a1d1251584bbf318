//! Local edits of a complex: split edges, add and remove arcs, relabel faces,
//! then dissolve walls that no longer separate different regions.

use std::collections::BTreeMap;

use crate::arc::{ArcSpec, Point};
use crate::complex::{self, BubbleComplex, ComplexBuilder, DraftEdge, FaceId, RegionLabel, UnionFind};
use crate::error::{Error, Result};

/// Distance (relative to the complex size) within which points are identified.
const SNAP: f64 = 1e-9;

pub(crate) struct Surgery {
    b: ComplexBuilder,
    alive: Vec<bool>,
    next_key: u64,
    scale: f64,
}

impl Surgery {
    pub fn new(c: &BubbleComplex) -> Self {
        let b = c.to_builder();
        let next_key = b.labels.keys().next_back().map_or(1, |k| k + 1);
        Surgery { alive: vec![true; b.edges.len()], b, next_key, scale: c.diameter().max(1e-300) }
    }

    /// Face key of a face of the source complex.
    pub fn key(f: FaceId) -> u64 {
        f.0 as u64
    }

    pub fn point(&self, v: usize) -> Point {
        self.b.vertices[v]
    }

    pub fn arc(&self, e: usize) -> ArcSpec {
        let d = &self.b.edges[e];
        ArcSpec::new(self.b.vertices[d.from], self.b.vertices[d.to], d.half_angle).expect("valid draft edge")
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        (self.b.edges[e].from, self.b.edges[e].to)
    }

    /// Vertex at `p`, reusing an existing one when it coincides.
    pub fn vertex(&mut self, p: Point) -> usize {
        match self.find_vertex(p) {
            Some(v) => v,
            None => self.b.vertex(p),
        }
    }

    pub fn find_vertex(&self, p: Point) -> Option<usize> {
        self.b.vertices.iter().position(|q| q.dist(p) <= SNAP * self.scale)
    }

    /// Splits edge `e` at parameter `t`; `e` keeps the first part. Returns the new vertex.
    pub fn split(&mut self, e: usize, t: f64) -> Result<usize> {
        let (a, b) = self.arc(e).split_at(t)?;
        let mid = self.b.vertex(a.end());
        let d = self.b.edges[e].clone();
        self.b.edges[e] = DraftEdge { to: mid, half_angle: a.half_angle(), ..d.clone() };
        self.b.edges.push(DraftEdge { from: mid, half_angle: b.half_angle(), ..d });
        self.alive.push(true);
        Ok(mid)
    }

    /// Splits edge `e` at a point lying on it.
    pub fn split_at_point(&mut self, e: usize, p: Point) -> Result<usize> {
        let arc = self.arc(e);
        let t = arc.parameter_of(p);
        if !(t > 0.0 && t < 1.0) || arc.point_at(t).dist(p) > 1e-7 * self.scale {
            return Err(Error::Precondition(format!("point ({}, {}) is not inside edge {e}", p.x, p.y)));
        }
        let v = self.split(e, t)?;
        self.b.vertices[v] = p;
        Ok(v)
    }

    /// Edge from `from` to `to`; face keys are filled in from the surrounding cycles.
    pub fn add_edge(&mut self, from: usize, to: usize, half_angle: f64) -> usize {
        self.alive.push(true);
        self.b.edge(from, to, half_angle)
    }

    pub fn edge_count(&self) -> usize {
        self.b.edges.len()
    }

    pub fn set_half_angle(&mut self, e: usize, half_angle: f64) {
        self.b.edges[e].half_angle = half_angle;
    }

    /// Live edge joining `u` and `v` that traces the arc `u -> v` with `half_angle`.
    pub fn find_edge(&self, u: usize, v: usize, half_angle: f64) -> Option<usize> {
        self.b.edges.iter().enumerate().position(|(e, d)| {
            self.alive[e]
                && ((d.from == u && d.to == v && (d.half_angle - half_angle).abs() < 1e-6)
                    || (d.from == v && d.to == u && (d.half_angle + half_angle).abs() < 1e-6))
        })
    }

    /// Moves vertex `v` to `p` without touching edge angles.
    pub fn move_vertex(&mut self, v: usize, p: Point) {
        self.b.vertices[v] = p;
    }

    /// Redirects every edge end at `from` to `to`.
    pub fn merge_vertex(&mut self, from: usize, to: usize) {
        for d in &mut self.b.edges {
            if d.from == from {
                d.from = to;
            }
            if d.to == from {
                d.to = to;
            }
        }
    }

    pub fn remove_edge(&mut self, e: usize) {
        self.alive[e] = false;
    }

    pub fn new_key(&mut self, label: RegionLabel) -> u64 {
        let k = self.next_key;
        self.next_key += 1;
        self.b.face(k, label);
        k
    }

    pub fn relabel(&mut self, key: u64, label: RegionLabel) {
        self.b.face(key, label);
    }

    /// Live draft restricted to surviving edges, with the index map back.
    fn live(&self) -> (ComplexBuilder, Vec<usize>) {
        let mut b =
            ComplexBuilder { vertices: self.b.vertices.clone(), edges: Vec::new(), labels: self.b.labels.clone() };
        let mut map = Vec::new();
        for (e, d) in self.b.edges.iter().enumerate() {
            if self.alive[e] {
                b.edges.push(d.clone());
                map.push(e);
            }
        }
        (b, map)
    }

    /// Gives `key` to the whole face lying on the given side of edge `e`.
    pub fn set_face(&mut self, e: usize, left: bool, key: u64) -> Result<()> {
        let (b, map) = self.live();
        let topo = complex::trace(&b)?;
        let local =
            map.iter().position(|&m| m == e).ok_or_else(|| Error::Precondition(format!("edge {e} was removed")))?;
        let h = 2 * local + usize::from(!left);
        for &g in &topo.cycles[topo.cycle_of[h]] {
            let d = &mut self.b.edges[map[g / 2]];
            if g % 2 == 0 {
                d.left = Some(key);
            } else {
                d.right = Some(key);
            }
        }
        Ok(())
    }

    /// Propagates keys along cycles, dissolves walls between equal labels and builds.
    pub fn finish(mut self) -> Result<BubbleComplex> {
        loop {
            let (b, map) = self.live();
            let topo = complex::trace(&b)?;
            for cyc in &topo.cycles {
                let key = cyc.iter().find_map(|&h| side(&b.edges[h / 2], h));
                if let Some(k) = key {
                    for &h in cyc {
                        let d = &mut self.b.edges[map[h / 2]];
                        let slot = if h % 2 == 0 { &mut d.left } else { &mut d.right };
                        slot.get_or_insert(k);
                    }
                }
            }
            let keys: Vec<u64> = self.b.labels.keys().copied().collect();
            let index: BTreeMap<u64, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let mut uf = UnionFind::new(keys.len());
            let mut dissolved = false;
            for &e in &map {
                let d = &self.b.edges[e];
                if let (Some(l), Some(r)) = (d.left, d.right) {
                    if self.b.labels[&l] == self.b.labels[&r] {
                        uf.union(index[&l], index[&r]);
                        self.alive[e] = false;
                        dissolved = true;
                    }
                }
            }
            if !dissolved {
                break;
            }
            for d in &mut self.b.edges {
                for slot in [&mut d.left, &mut d.right] {
                    if let Some(k) = slot {
                        *k = keys[uf.find(index[k])];
                    }
                }
            }
        }
        let (b, _) = self.live();
        let mut out = ComplexBuilder { vertices: Vec::new(), edges: Vec::new(), labels: b.labels.clone() };
        let mut remap = vec![usize::MAX; b.vertices.len()];
        for d in &b.edges {
            let mut d = d.clone();
            for end in [&mut d.from, &mut d.to] {
                if remap[*end] == usize::MAX {
                    remap[*end] = out.vertex(b.vertices[*end]);
                }
                *end = remap[*end];
            }
            out.edges.push(d);
        }
        out.build()?.merge_joints()
    }
}

fn side(d: &DraftEdge, h: usize) -> Option<u64> {
    if h % 2 == 0 {
        d.left
    } else {
        d.right
    }
}
