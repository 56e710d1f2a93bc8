use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{is_nonconvex, sphere_points, volume_centroid, Family, GeneratorError, MAX_RETRIES};
use crate::clip::sort_ccw_on_plane;
use crate::geometry::{newell_normal, polyhedron_volume, Face, Plane, Point3, Polyhedron, Tolerances};
use crate::oracle::halfspace_vertices;

/// Half-size of the guard box used to detect unbounded cells.
const GUARD: f64 = 1e3;
/// Distance under which a cell vertex counts as lying on a half-space plane.
const TIGHT_EPS: f64 = 1e-9;

/// Convex cell bounded by `planes` (outward unit normals `normals`, each
/// plane at distance 1 from the origin), as polygonal faces. `None` when
/// the cell is unbounded or degenerate.
fn tangent_cell(normals: &[Point3]) -> Option<Polyhedron> {
    let mut planes: Vec<Plane> = normals.iter().map(|&u| Plane::from_unit_normal(u, -u)).collect();
    let guard = crate::geometry::Aabb {
        min: Point3::new(-GUARD, -GUARD, -GUARD),
        max: Point3::new(GUARD, GUARD, GUARD),
    };
    planes.extend(guard.inward_planes());
    let tol = Tolerances::from_diagonal(1.0);
    let verts = halfspace_vertices(&planes, &tol);
    if verts.len() < 4 || verts.iter().any(|v| v.x.abs().max(v.y.abs()).max(v.z.abs()) > GUARD * 0.5) {
        return None;
    }
    let mut faces = Vec::new();
    let mut face_normals = Vec::new();
    for &u in normals {
        let ids: Vec<usize> = (0..verts.len()).filter(|&i| (u.dot(verts[i]) - 1.0).abs() <= TIGHT_EPS).collect();
        if ids.len() < 3 {
            continue;
        }
        let face = sort_ccw_on_plane(&verts, &ids, &Plane::from_unit_normal(u, -u)).ok()?;
        faces.push(face);
        face_normals.push(u);
    }
    let cell = Polyhedron::new(verts, faces, Some(face_normals)).ok()?;
    cell.validate_closed().ok()?;
    Some(cell)
}

/// Replaces the largest face of `cell` by a fan around its vertex centroid
/// and moves the fan apex to the volume centroid of the cell.
fn fan_largest_face(cell: &Polyhedron) -> Option<Polyhedron> {
    let area = |f: usize| crate::geometry::polyhedron::newell_vector(cell.face_points(f)).norm();
    let largest = (0..cell.faces().len()).max_by(|&a, &b| area(a).total_cmp(&area(b)))?;
    let centroid = volume_centroid(cell);
    let (mut verts, faces, normals) = cell.clone().into_parts();
    let normals = normals?;
    let apex = verts.len();
    verts.push(centroid);

    let mut out_faces = Vec::with_capacity(faces.len() + 8);
    let mut out_normals = Vec::with_capacity(faces.len() + 8);
    for (fi, face) in faces.into_iter().enumerate() {
        if fi != largest {
            out_faces.push(face);
            out_normals.push(normals[fi]);
            continue;
        }
        for (a, b) in face.edges() {
            let tri = [verts[a], verts[b], centroid];
            out_normals.push(newell_normal(&tri).ok()?);
            out_faces.push(Face::new(alloc::vec![a, b, apex]));
        }
    }
    let poly = Polyhedron::new(verts, out_faces, Some(out_normals)).ok()?;
    poly.validate_closed().ok()?;
    (polyhedron_volume(&poly) > 0.0).then_some(poly)
}

/// Non-convex "voro-like" element: the convex cell of `n_halfspaces`
/// random half-spaces tangent to the unit sphere, with its largest face
/// fanned from a centre vertex that is then moved to the cell centroid.
///
/// Unbounded cells are resampled.
pub fn gen_voro_like(n_halfspaces: usize, seed: u64) -> Result<Polyhedron, GeneratorError> {
    if n_halfspaces < 4 {
        return Err(GeneratorError::ParameterOutOfRange {
            family: Family::VoroLike,
            value: n_halfspaces as f64,
            expected: "at least 4 half-spaces",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_RETRIES {
        let normals = sphere_points(n_halfspaces, &mut rng);
        let Some(cell) = tangent_cell(&normals) else {
            continue;
        };
        let Some(poly) = fan_largest_face(&cell) else {
            continue;
        };
        let tol = Tolerances::for_polyhedron(&poly).expect("non-empty vertex pool");
        if !is_nonconvex(&poly, tol.eps_classify) {
            continue;
        }
        if attempt > 0 {
            log::debug!("voro-like n={n_halfspaces} seed={seed}: accepted after {attempt} rejections");
        }
        return Ok(poly);
    }
    Err(GeneratorError::RetriesExhausted { family: Family::VoroLike, attempts: MAX_RETRIES })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn voro8_shape() {
        let p = gen_voro_like(8, 1).unwrap();
        p.validate_closed().unwrap();
        assert!(p.faces().iter().any(|f| f.len() > 3));
        let tol = Tolerances::for_polyhedron(&p).unwrap();
        assert!(is_nonconvex(&p, tol.eps_classify));
    }

    #[test]
    fn minimal_cell_is_a_fanned_tetrahedron() {
        let p = gen_voro_like(4, 3).unwrap();
        assert_eq!(p.verts().len(), 5);
        assert_eq!(p.faces().len(), 6);
        assert!(p.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn unbounded_normals_are_rejected() {
        // all normals in the upper hemisphere: the cell is open downward
        let normals = [
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(0.6, 0.0, 0.8),
            Point3::new(-0.6, 0.0, 0.8),
            Point3::new(0.0, 0.6, 0.8),
        ];
        assert!(tangent_cell(&normals).is_none());
    }
}
