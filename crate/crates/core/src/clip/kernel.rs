use alloc::vec::Vec;

use thiserror::Error;

use super::polyhedron::{polyhedron_plane_intersection, ClipError, ClipStats};
use crate::geometry::{compute_aabb, polyhedron_volume, Aabb, GeometryError, Plane, Polyhedron, Tolerances};

/// Normals closer than this are considered equal when detecting repeated
/// face planes.
const SAME_NORMAL_TOL: f64 = 1e-9;
/// Absolute slack for the volume of successive kernel estimates.
const NESTING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("invalid input polyhedron: {0}")]
    InvalidInput(#[from] GeometryError),
    #[error("input polyhedron has {verts} vertices and {faces} faces; a closed solid needs at least 4 of each")]
    TooSmall { verts: usize, faces: usize },
    #[error("input polyhedron is degenerate (signed volume {volume:e})")]
    DegenerateInput { volume: f64 },
    #[error("clipping failed at face {face}: {source}")]
    Clip { face: usize, source: ClipError },
    #[error("invariant violated after cutting with face {face}: {detail}")]
    InvariantViolation { face: usize, detail: alloc::string::String },
}

impl KernelError {
    /// True for errors caused by a bad input, false for internal failures.
    pub fn is_input_error(&self) -> bool {
        matches!(self, KernelError::InvalidInput(_) | KernelError::TooSmall { .. } | KernelError::DegenerateInput { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelOptions {
    /// Validate the closed-manifold property and volume nesting after every
    /// cut. On by default in debug builds.
    pub check_invariants: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { check_invariants: cfg!(debug_assertions) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelResult {
    /// The kernel, a convex polyhedron; `None` when the kernel is empty.
    pub kernel: Option<Polyhedron>,
    pub is_empty: bool,
    pub volume: f64,
    /// Number of planes actually applied.
    pub cuts_performed: usize,
    /// Faces whose plane had already been applied.
    pub faces_skipped_coplanar: usize,
}

impl KernelResult {
    pub(crate) fn empty(cuts_performed: usize, faces_skipped_coplanar: usize) -> Self {
        KernelResult { kernel: None, is_empty: true, volume: 0.0, cuts_performed, faces_skipped_coplanar }
    }

    pub fn vertices(&self) -> &[crate::geometry::Point3] {
        self.kernel.as_ref().map_or(&[], |k| k.verts())
    }
}

/// State of the kernel estimate right after one cut.
#[derive(Debug)]
pub struct CutStep<'a> {
    /// Index of the input face whose plane was applied.
    pub face: usize,
    pub plane: Plane,
    /// The estimate after the cut; empty when the cut emptied it.
    pub kernel: &'a Polyhedron,
    pub volume: f64,
    pub stats: ClipStats,
    pub cap_face_added: bool,
}

/// Kernel of `poly` with tolerances derived from its bounding box.
pub fn compute_kernel(poly: &Polyhedron) -> Result<KernelResult, KernelError> {
    let tol = Tolerances::for_polyhedron(poly)?;
    polyhedron_kernel(poly, &tol)
}

pub fn polyhedron_kernel(poly: &Polyhedron, tol: &Tolerances) -> Result<KernelResult, KernelError> {
    polyhedron_kernel_with(poly, tol, &KernelOptions::default(), |_| {})
}

/// Computes the kernel of a simple polyhedron.
///
/// The estimate starts as the bounding box of `poly` and is cut, in face
/// order, by the plane of every face oriented into the polyhedron. Faces
/// whose plane has already been applied are skipped. The run stops early
/// as soon as the estimate has fewer than four vertices, becomes flat or
/// its volume drops to `eps_classify³`.
///
/// Outward normals are taken from `poly` when present; otherwise they are
/// computed by Newell's method and flipped if the winding is inward.
/// `observer` sees the estimate after every applied cut.
pub fn polyhedron_kernel_with(
    poly: &Polyhedron,
    tol: &Tolerances,
    opts: &KernelOptions,
    mut observer: impl FnMut(&CutStep<'_>),
) -> Result<KernelResult, KernelError> {
    let (nv, nf) = (poly.verts().len(), poly.faces().len());
    if nv < 4 || nf < 4 {
        return Err(KernelError::TooSmall { verts: nv, faces: nf });
    }
    poly.validate_closed()?;
    let normals = poly.outward_normals()?;
    let input_volume = polyhedron_volume(poly);
    if input_volume.abs() <= tol.eps_volume() {
        return Err(KernelError::DegenerateInput { volume: input_volume });
    }
    let box_volume = Aabb::from_points(poly.verts())?.volume();
    let slack = NESTING_SLACK * box_volume.max(1.0);

    let mut k = compute_aabb(poly)?;
    let mut volume = polyhedron_volume(&k);
    let mut applied: Vec<Plane> = Vec::new();
    let mut cuts = 0;
    let mut skipped = 0;

    for (fi, face) in poly.faces().iter().enumerate() {
        let plane = Plane::from_unit_normal(poly.verts()[face[0]], -normals[fi]);
        if applied.iter().any(|p| p.coincides_with(&plane, SAME_NORMAL_TOL, tol.eps_classify)) {
            skipped += 1;
            continue;
        }
        applied.push(plane);

        let clip = polyhedron_plane_intersection(&k, &plane, tol)
            .map_err(|source| KernelError::Clip { face: fi, source })?;
        cuts += 1;
        let emptied = clip.above.is_empty() || clip.flat || clip.above.verts().len() < 4;
        let next_volume = if emptied { 0.0 } else { polyhedron_volume(&clip.above) };

        if opts.check_invariants && !emptied {
            if let Err(e) = clip.above.validate_closed() {
                return Err(KernelError::InvariantViolation { face: fi, detail: alloc::format!("{e}") });
            }
            if next_volume > volume + slack {
                return Err(KernelError::InvariantViolation {
                    face: fi,
                    detail: alloc::format!("volume grew from {volume:e} to {next_volume:e}"),
                });
            }
        }

        observer(&CutStep {
            face: fi,
            plane,
            kernel: &clip.above,
            volume: next_volume,
            stats: clip.stats,
            cap_face_added: clip.cap_face_added,
        });

        if emptied || next_volume <= tol.eps_volume() {
            log::debug!("kernel emptied by face {fi} after {cuts} cuts");
            return Ok(KernelResult::empty(cuts, skipped));
        }
        k = clip.above;
        volume = next_volume;
    }

    Ok(KernelResult {
        kernel: Some(k),
        is_empty: false,
        volume,
        cuts_performed: cuts,
        faces_skipped_coplanar: skipped,
    })
}
