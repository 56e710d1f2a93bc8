//! The clipping pipeline: segment, polygon and polyhedron intersection with
//! a plane, and the kernel driver built on top of them.

mod kernel;
mod line;
mod polygon;
mod polyhedron;

pub use kernel::{
    compute_kernel, polyhedron_kernel, polyhedron_kernel_with, CutStep, KernelError,
    KernelOptions, KernelResult,
};
pub use line::{line_plane_intersection, line_plane_parameter, LinePlaneError};
pub use polygon::{polygon_plane_intersection, ClippedPolygon};
pub use polyhedron::{polyhedron_plane_intersection, sort_ccw_on_plane, ClipError, ClipResult, ClipStats};

