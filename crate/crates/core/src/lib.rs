//! Geometric kernel of simple polyhedra.
//!
//! The kernel of a polyhedron is the set of interior points from which the
//! whole polyhedron is visible; it equals the intersection of the inward
//! half-spaces of all face planes. This crate computes it by starting from
//! the axis-aligned bounding box and clipping it, face by face, with the
//! plane of every face of the input ([`clip::polyhedron_kernel`]).
//!
//! Alongside the clipping pipeline the crate carries an independent
//! brute-force oracle ([`oracle`]) and deterministic generators for the
//! synthetic model families used to exercise it ([`generators`]).
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. File formats, the batch runner and the CLI live in the
//! companion `polykernel` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod clip;
pub mod generators;
pub mod geometry;
mod math;
pub mod oracle;

pub use clip::{
    compute_kernel, polyhedron_kernel, polyhedron_kernel_with, ClipResult, ClipStats, CutStep,
    KernelError, KernelOptions, KernelResult,
};
pub use geometry::{
    Aabb, Classification, Face, GeometryError, Plane, Point3, Polyhedron, Side, Tolerances,
};
