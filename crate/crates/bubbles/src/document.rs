//! JSON interchange format for complexes.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arc::Point;
use crate::complex::{BubbleComplex, ComplexBuilder, EdgeId, RegionLabel};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: usize,
    pub v_from: usize,
    pub v_to: usize,
    pub half_angle: f64,
    pub face_left: usize,
    pub face_right: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub id: usize,
    pub region_label: RegionLabel,
}

/// Serialized form of a [`BubbleComplex`]. Face `0` is the exterior.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub format_version: String,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub faces: Vec<FaceRecord>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl ComplexDocument {
    pub fn from_complex(c: &BubbleComplex) -> Self {
        let vertices = c.vertices().iter().enumerate().map(|(id, p)| VertexRecord { id, x: p.x, y: p.y }).collect();
        let edges = c
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeRecord {
                id,
                v_from: e.from.0,
                v_to: e.to.0,
                half_angle: e.half_angle,
                face_left: c.half_edge(EdgeId(id).forward()).face.0,
                face_right: c.half_edge(EdgeId(id).backward()).face.0,
            })
            .collect();
        let faces = c.faces().iter().map(|f| FaceRecord { id: f.id.0, region_label: f.region }).collect();
        ComplexDocument { format_version: FORMAT_VERSION.into(), vertices, edges, faces, metadata: BTreeMap::new() }
    }

    pub fn to_complex(&self) -> Result<BubbleComplex> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidComplex(format!("unsupported format_version {:?}", self.format_version)));
        }
        let mut b = ComplexBuilder::new();
        let mut vmap = HashMap::new();
        for v in &self.vertices {
            if vmap.insert(v.id, b.vertex(Point::new(v.x, v.y))).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut seen = HashMap::new();
        for f in &self.faces {
            if seen.insert(f.id, f.region_label).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate face id {}", f.id)));
            }
            b.face(f.id as u64, f.region_label);
        }
        let mut eids = HashMap::new();
        for e in &self.edges {
            if eids.insert(e.id, ()).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate edge id {}", e.id)));
            }
            let end = |id: usize| {
                vmap.get(&id)
                    .copied()
                    .ok_or_else(|| Error::InvalidComplex(format!("edge {} uses unknown vertex {id}", e.id)))
            };
            for f in [e.face_left, e.face_right] {
                if !seen.contains_key(&f) {
                    return Err(Error::InvalidComplex(format!("edge {} uses unknown face {f}", e.id)));
                }
            }
            b.edge_between(end(e.v_from)?, end(e.v_to)?, e.half_angle, e.face_left as u64, e.face_right as u64);
        }
        b.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidComplex(format!("malformed document: {e}")))
    }
}

pub fn load(path: &Path) -> Result<BubbleComplex> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    ComplexDocument::from_json(&text)?.to_complex()
}

pub fn save(c: &BubbleComplex, path: &Path) -> Result<()> {
    std::fs::write(path, ComplexDocument::from_complex(c).to_json())
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_version_and_references() {
        let mut b = ComplexBuilder::new();
        b.face(1, RegionLabel::new(1));
        b.circle(Point::ORIGIN, 1.0, 2, 1, Some(0));
        b.face(0, RegionLabel::EXTERIOR);
        let c = b.build().unwrap();
        let mut doc = ComplexDocument::from_complex(&c);
        assert!(doc.to_complex().is_ok());
        doc.format_version = "2".into();
        assert!(doc.to_complex().is_err());
        doc.format_version = "1".into();
        doc.edges[0].face_left = 9;
        assert!(doc.to_complex().is_err());
        assert!(ComplexDocument::from_json("{").is_err());
    }
}
