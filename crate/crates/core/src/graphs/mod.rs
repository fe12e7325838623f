//! Graph and multigraph types, canonical shapes, subgraph counting and
//! overlays.

mod canon;
mod count;
pub mod embed;
mod graph;
pub mod io;
mod overlay;

pub use canon::{
    aut_count, automorphism_count, canonical_labeling, canonicalize, canonicalize_multigraph,
    CanonicalShape, Pattern, MAX_CANON_VERTICES,
};
pub use count::{c4_count, count_subgraphs, injective_hom_count, triangle_count};
pub use graph::{Graph, Multigraph};
pub use overlay::{
    is_cycle_with_doubled_pendants, overlay, overlay_classify, ComponentTag, EmbeddedGraph,
    OverlayMode, OverlayReport,
};
