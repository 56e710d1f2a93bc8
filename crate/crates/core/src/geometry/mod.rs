//! Primitive types and predicates consumed by the clipping pipeline.

mod plane;
mod point;
pub(crate) mod polyhedron;

pub use plane::{Classification, Plane, Side, Tolerances};
pub use point::Point3;
pub use polyhedron::{
    compute_aabb, face_plane, newell_normal, polyhedron_volume, Aabb, Face, Polyhedron,
};

use thiserror::Error;

/// Errors raised while building or inspecting geometric structures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate in vertex {0}")]
    NonFinite(usize),
    #[error("empty vertex pool")]
    EmptyVertexPool,
    #[error("degenerate polygon: normal vector vanishes")]
    DegeneratePolygon,
    #[error("zero-length plane normal")]
    ZeroNormal,
    #[error("face {face} has {len} vertices, at least 3 required")]
    FaceTooSmall { face: usize, len: usize },
    #[error("face {face} references vertex {index}, but only {len} vertices exist")]
    IndexOutOfRange { face: usize, index: usize, len: usize },
    #[error("face {face} repeats vertex {index}")]
    RepeatedIndex { face: usize, index: usize },
    #[error("{normals} face normals given for {faces} faces")]
    NormalCountMismatch { normals: usize, faces: usize },
    #[error("face normal {0} is not unit length")]
    NonUnitNormal(usize),
    #[error("edge ({a}, {b}) is used by {count} faces (first offending face {face})")]
    NonManifoldEdge { face: usize, a: usize, b: usize, count: usize },
    #[error("directed edge ({a}, {b}) appears twice (face {face}): inconsistent winding")]
    InconsistentWinding { face: usize, a: usize, b: usize },
}
