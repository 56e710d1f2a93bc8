use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{convex_hull_3d, is_nonconvex, sphere_points, volume_centroid, Family, GeneratorError, MAX_RETRIES};
use crate::geometry::{polyhedron_volume, Polyhedron, Tolerances};

/// Convex hull of `n` seeded random points on the unit sphere.
pub fn gen_convex(n: usize, seed: u64) -> Result<Polyhedron, GeneratorError> {
    if n < 4 {
        return Err(GeneratorError::ParameterOutOfRange {
            family: Family::TetLike,
            value: n as f64,
            expected: "at least 4 points",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let hull = convex_hull_3d(&sphere_points(n, &mut rng))?;
        if hull.verts().len() == n {
            return Ok(hull);
        }
    }
    Err(GeneratorError::RetriesExhausted { family: Family::TetLike, attempts: MAX_RETRIES })
}

/// Moves `vertex` of a convex polyhedron to the volume centroid. Faces keep
/// their winding; normals are recomputed per face.
///
/// Returns `None` if the result has a degenerate face or does not have a
/// smaller positive volume.
pub fn move_vertex_to_centroid(convex: &Polyhedron, vertex: usize) -> Option<Polyhedron> {
    let centroid = volume_centroid(convex);
    let (mut verts, faces, _) = convex.clone().into_parts();
    verts[vertex] = centroid;
    let moved = Polyhedron::new(verts, faces, None).ok()?;
    let normals = moved.newell_normals().ok()?;
    let (verts, faces, _) = moved.into_parts();
    let moved = Polyhedron::new(verts, faces, Some(normals)).ok()?;
    let v = polyhedron_volume(&moved);
    (v > 0.0 && v < polyhedron_volume(convex)).then_some(moved)
}

/// Non-convex "tet-like" element with `n_vertices` vertices: the convex hull
/// of random points on the unit sphere, with its first hull vertex moved to
/// the hull centroid.
pub fn gen_tet_like(n_vertices: usize, seed: u64) -> Result<Polyhedron, GeneratorError> {
    if n_vertices < 5 {
        return Err(GeneratorError::ParameterOutOfRange {
            family: Family::TetLike,
            value: n_vertices as f64,
            expected: "at least 5 vertices",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0usize;
    for _ in 0..MAX_RETRIES {
        let points: Vec<_> = sphere_points(n_vertices, &mut rng);
        let Ok(hull) = convex_hull_3d(&points) else {
            rejected += 1;
            continue;
        };
        if hull.verts().len() != n_vertices {
            rejected += 1;
            continue;
        }
        let Some(moved) = move_vertex_to_centroid(&hull, 0) else {
            rejected += 1;
            continue;
        };
        let tol = Tolerances::for_polyhedron(&moved).expect("non-empty vertex pool");
        if moved.validate_closed().is_err() || !is_nonconvex(&moved, tol.eps_classify) {
            rejected += 1;
            continue;
        }
        if rejected > 0 {
            log::debug!("tet-like n={n_vertices} seed={seed}: {rejected} samples rejected");
        }
        return Ok(moved);
    }
    Err(GeneratorError::RetriesExhausted { family: Family::TetLike, attempts: MAX_RETRIES })
}
