pub mod arc;
pub mod complex;
pub mod document;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod lemmas;
pub mod minimize;
pub mod moves;
pub mod regularity;
mod surgery;
pub mod svg;

pub use arc::{ArcSpec, Point};
pub use complex::{BubbleComplex, ComplexBuilder, EdgeId, FaceId, HalfEdgeId, RegionLabel, VertexId};
pub use error::{Error, Result};

// The guide's chapters, so that `cargo test --doc` runs their snippets.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/arcs.md")]
    mod arcs {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/regularity.md")]
    mod regularity {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/moves.md")]
    mod moves {}
    #[doc = include_str!("../../../book/src/minimizer.md")]
    mod minimizer {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
