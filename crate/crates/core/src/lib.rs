//! Rotation systems of small complete graphs and what they say about
//! crossing numbers on orientable surfaces.

pub mod bounds;
pub mod canon;
pub mod facetrace;
pub mod insertion;
pub mod rotation;
pub mod search;

pub use canon::{canonical_form, classify, CanonicalCode, IsoClass};
pub use facetrace::{
    trace_faces, verify_embedding, EmbeddingReport, FaceProfile, FaceSet, FaceWalk,
    SurfaceInvariants,
};
pub use insertion::{best_insertion, build_dual, plan_insertion, DualGraph, InsertionPlan};
pub use rotation::{
    parse_rotation, DirectedEdge, PartialRotation, RotationError, RotationFile, RotationSystem,
    Vertex,
};
pub use search::{run_search, SearchConfig, SearchError, SearchResult, StageCounters};
