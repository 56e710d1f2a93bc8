//! Independent ground truth for the clipping pipeline.
//!
//! Nothing here calls into [`crate::clip`]: the kernel is recovered by
//! enumerating every triple of half-space planes, and volumes are checked
//! by Monte Carlo sampling of the half-space system.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clip::KernelResult;
use crate::generators::hull::{convex_hull_3d, HullError};
use crate::geometry::{polyhedron_volume, Aabb, GeometryError, Plane, Point3, Polyhedron, Tolerances};
use crate::math;

/// Largest face count accepted by [`brute_force_kernel`] (cubic enumeration).
pub const MAX_BRUTE_FORCE_FACES: usize = 200;

/// Triples of unit normals with a smaller determinant are treated as
/// near-parallel and skipped.
pub const MIN_TRIPLE_DETERMINANT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("brute-force oracle limited to {limit} faces, got {faces}")]
    TooManyFaces { faces: usize, limit: usize },
    #[error("empty point set")]
    EmptyPointSet,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Inward-oriented face planes of a polyhedron; the kernel is the
/// intersection of their half-spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceSystem {
    pub planes: Vec<Plane>,
}

impl HalfspaceSystem {
    pub fn new(planes: Vec<Plane>) -> Self {
        HalfspaceSystem { planes }
    }

    /// One inward plane per face, through the face's first vertex.
    pub fn from_polyhedron(poly: &Polyhedron) -> Result<Self, GeometryError> {
        let normals = poly.outward_normals()?;
        let planes = poly
            .faces()
            .iter()
            .zip(&normals)
            .map(|(f, &n)| Plane::from_unit_normal(poly.verts()[f[0]], -n))
            .collect();
        Ok(HalfspaceSystem { planes })
    }

    pub fn with_planes(mut self, extra: impl IntoIterator<Item = Plane>) -> Self {
        self.planes.extend(extra);
        self
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }
}

/// True iff `x` is within `eps_classify` of every half-space of `system`.
pub fn membership(x: Point3, system: &HalfspaceSystem, tol: &Tolerances) -> bool {
    system.planes.iter().all(|p| p.signed_distance(x) >= -tol.eps_classify)
}

/// Every point where three planes of `planes` meet and which satisfies all
/// of them, merged within `eps_merge`.
pub fn halfspace_vertices(planes: &[Plane], tol: &Tolerances) -> Vec<Point3> {
    // n·x = d form
    let rows: Vec<(Point3, f64)> = planes.iter().map(|p| (p.n, p.n.dot(p.s))).collect();
    let feasible = |x: Point3| rows.iter().all(|&(n, d)| n.dot(x) - d >= -tol.eps_classify);
    let mut out: Vec<Point3> = Vec::new();
    let m = rows.len();
    for i in 0..m {
        for j in i + 1..m {
            let nij = rows[i].0.cross(rows[j].0);
            if nij.norm_squared() < MIN_TRIPLE_DETERMINANT * MIN_TRIPLE_DETERMINANT {
                continue;
            }
            for k in j + 1..m {
                let (ni, di) = rows[i];
                let (nj, dj) = rows[j];
                let (nk, dk) = rows[k];
                let det = nk.dot(nij);
                if det.abs() < MIN_TRIPLE_DETERMINANT {
                    continue;
                }
                let x = (nj.cross(nk) * di + nk.cross(ni) * dj + nij * dk) / det;
                if !x.is_finite() || !feasible(x) {
                    continue;
                }
                if !out.iter().any(|q| q.distance(x) <= tol.eps_merge) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Kernel by exhaustive vertex enumeration of the face half-spaces plus
/// the six bounding-box half-spaces.
pub fn brute_force_kernel(poly: &Polyhedron, tol: &Tolerances) -> Result<KernelResult, OracleError> {
    let faces = poly.faces().len();
    if faces > MAX_BRUTE_FORCE_FACES {
        return Err(OracleError::TooManyFaces { faces, limit: MAX_BRUTE_FORCE_FACES });
    }
    let aabb = Aabb::from_points(poly.verts())?;
    let system = HalfspaceSystem::from_polyhedron(poly)?.with_planes(aabb.inward_planes());
    let points = halfspace_vertices(&system.planes, tol);
    if points.len() < 4 {
        return Ok(KernelResult::empty(0, 0));
    }
    let hull = match convex_hull_3d(&points) {
        Ok(h) => h,
        Err(HullError::Degenerate | HullError::TooFewPoints(_)) => return Ok(KernelResult::empty(0, 0)),
    };
    let volume = polyhedron_volume(&hull);
    if volume <= tol.eps_volume() {
        return Ok(KernelResult::empty(0, 0));
    }
    Ok(KernelResult {
        kernel: Some(hull),
        is_empty: false,
        volume,
        cuts_performed: 0,
        faces_skipped_coplanar: 0,
    })
}

/// Result of [`monte_carlo_volume`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub volume: f64,
    /// One standard error of `volume`.
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
}

/// Box volume times the fraction of uniform box samples that pass
/// [`membership`]. Deterministic for a fixed seed.
pub fn monte_carlo_volume(
    system: &HalfspaceSystem,
    bounds: &Aabb,
    n_samples: u64,
    seed: u64,
    tol: &Tolerances,
) -> MonteCarloEstimate {
    let n_samples = n_samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = bounds.extent();
    let mut hits = 0u64;
    for _ in 0..n_samples {
        let x = Point3::new(
            bounds.min.x + e.x * rng.gen::<f64>(),
            bounds.min.y + e.y * rng.gen::<f64>(),
            bounds.min.z + e.z * rng.gen::<f64>(),
        );
        if membership(x, system, tol) {
            hits += 1;
        }
    }
    let frac = hits as f64 / n_samples as f64;
    let box_volume = bounds.volume();
    MonteCarloEstimate {
        volume: box_volume * frac,
        std_error: box_volume * math::sqrt(frac * (1.0 - frac) / n_samples as f64),
        hits,
        samples: n_samples,
        seed,
    }
}

/// Largest distance from a point of `a` to its nearest point in `b`.
pub fn directed_hausdorff(a: &[Point3], b: &[Point3]) -> Result<f64, OracleError> {
    if a.is_empty() || b.is_empty() {
        return Err(OracleError::EmptyPointSet);
    }
    Ok(a.iter()
        .map(|&p| b.iter().map(|&q| p.distance(q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_vertex_distance(a: &[Point3], b: &[Point3]) -> Result<f64, OracleError> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}
