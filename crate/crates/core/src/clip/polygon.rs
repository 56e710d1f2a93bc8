use alloc::vec::Vec;

use super::line::{line_plane_intersection, LinePlaneError};
use crate::geometry::{Face, Plane, Point3, Side, Tolerances};

/// One vertex emitted while walking a face against a plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClipVertex {
    /// An original vertex of the face.
    Kept(usize),
    /// The crossing point of the directed edge `from → to`.
    Crossing { from: usize, to: usize },
}

/// Walks the edges `(v1, v2)` of `face` and emits the part weakly above the
/// plane. Only `v2` or a crossing point is ever emitted, never `v1`, so each
/// vertex shows up once. A surviving first vertex stays first, so the fan
/// triangulation of the kept part starts from the same apex as before.
///
/// | `v1`            | `v2`            | emitted           |
/// |-----------------|-----------------|-------------------|
/// | strictly below  | strictly below  | nothing           |
/// | weakly below    | on              | `v2`              |
/// | weakly above    | weakly above    | `v2`              |
/// | strictly above  | strictly below  | crossing          |
/// | strictly below  | strictly above  | crossing, `v2`    |
/// | on              | strictly below  | nothing           |
pub(crate) fn clip_polygon_sides(face: &[usize], side: impl Fn(usize) -> Side) -> Vec<ClipVertex> {
    let n = face.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let (id1, id2) = (face[(i + n - 1) % n], face[i]);
        let (s1, s2) = (side(id1), side(id2));
        match (s1, s2) {
            (Side::StrictlyBelow, Side::StrictlyBelow) => {}
            (_, Side::On) => out.push(ClipVertex::Kept(id2)),
            (Side::On | Side::StrictlyAbove, Side::StrictlyAbove) => out.push(ClipVertex::Kept(id2)),
            (Side::StrictlyAbove, Side::StrictlyBelow) => {
                out.push(ClipVertex::Crossing { from: id1, to: id2 })
            }
            (Side::StrictlyBelow, Side::StrictlyAbove) => {
                out.push(ClipVertex::Crossing { from: id1, to: id2 });
                out.push(ClipVertex::Kept(id2));
            }
            (Side::On, Side::StrictlyBelow) => {}
        }
    }
    if let Some(first) = out.iter().position(|v| *v == ClipVertex::Kept(face[0])) {
        out.rotate_left(first);
    }
    out
}

/// Part of a polygon weakly above a plane.
///
/// `points[i]` is the position of the vertex with id `ids[i]`; original
/// vertices keep their index, crossing points get fresh ids `max + 1`,
/// `max + 2`, ... where `max` is the largest index of the input face.
#[derive(Clone, Debug, PartialEq)]
pub struct ClippedPolygon {
    pub points: Vec<Point3>,
    pub ids: Vec<usize>,
}

/// Clips the polygon `poly_f` (indices into `poly_v`) against `plane`,
/// keeping the counter-clockwise sub-polygon weakly above it.
pub fn polygon_plane_intersection(
    poly_v: &[Point3],
    poly_f: &Face,
    plane: &Plane,
    tol: &Tolerances,
) -> Result<ClippedPolygon, LinePlaneError> {
    let side = |i: usize| plane.classify(poly_v[i], tol).side;
    let mut next_id = poly_f.iter().copied().max().unwrap_or(0);
    let emitted = clip_polygon_sides(poly_f, side);
    let mut out = ClippedPolygon { points: Vec::with_capacity(emitted.len()), ids: Vec::with_capacity(emitted.len()) };
    for v in emitted {
        match v {
            ClipVertex::Kept(i) => {
                out.points.push(poly_v[i]);
                out.ids.push(i);
            }
            ClipVertex::Crossing { from, to } => {
                next_id += 1;
                out.points.push(line_plane_intersection(poly_v[from], poly_v[to], plane)?);
                out.ids.push(next_id);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::from_diagonal(2f64.sqrt())
    }

    fn square() -> Vec<Point3> {
        vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ]
    }

    /// Shoelace area in the xy-plane; independent of the clipping code.
    fn shoelace(points: &[Point3]) -> f64 {
        let n = points.len();
        (0..n)
            .map(|i| {
                let (a, b) = (points[i], points[(i + 1) % n]);
                a.x * b.y - b.x * a.y
            })
            .sum::<f64>()
            / 2.0
    }

    #[test]
    fn half_square() {
        let plane = Plane::from_unit_normal(Point3::new(0.5, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0));
        let out = polygon_plane_intersection(&square(), &Face::new(vec![0, 1, 2, 3]), &plane, &tol()).unwrap();
        assert_eq!(out.ids, vec![4, 1, 2, 5]);
        assert_eq!(out.points[0], Point3::new(0.5, 0.0, 0.0));
        assert_eq!(out.points[3], Point3::new(0.5, 1.0, 0.0));
        assert!(out.points.iter().all(|p| p.x >= 0.5));
        assert!((shoelace(&out.points) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn triangle_section() {
        let tri = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0), Point3::new(0.0, 2.0, 0.0)];
        let plane = Plane::from_unit_normal(Point3::new(1.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0));
        let out = polygon_plane_intersection(&tri, &Face::new(vec![0, 1, 2]), &plane, &tol()).unwrap();
        assert_eq!(
            out.points,
            vec![Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0), Point3::new(1.0, 1.0, 0.0)]
        );
        assert!(shoelace(&out.points) > 0.0);
    }

    #[test]
    fn diagonal_through_vertices_emits_no_crossings() {
        let n = Point3::new(1.0, 1.0, 0.0).normalized().unwrap();
        let plane = Plane::from_unit_normal(Point3::new(1.0, 0.0, 0.0), n);
        let out = polygon_plane_intersection(&square(), &Face::new(vec![0, 1, 2, 3]), &plane, &tol()).unwrap();
        assert_eq!(out.ids, vec![1, 2, 3]);
        assert!((shoelace(&out.points) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entering_edge_emits_crossing_then_vertex() {
        let sides = [Side::StrictlyBelow, Side::StrictlyAbove, Side::StrictlyAbove, Side::StrictlyBelow];
        let out = clip_polygon_sides(&[0, 1, 2, 3], |i| sides[i]);
        assert_eq!(
            out,
            vec![
                ClipVertex::Crossing { from: 0, to: 1 },
                ClipVertex::Kept(1),
                ClipVertex::Kept(2),
                ClipVertex::Crossing { from: 2, to: 3 },
            ]
        );
    }

    #[test]
    fn vertex_on_plane_then_below_is_silent() {
        let sides = [Side::On, Side::StrictlyBelow, Side::On, Side::StrictlyAbove];
        let out = clip_polygon_sides(&[0, 1, 2, 3], |i| sides[i]);
        assert_eq!(out, vec![ClipVertex::Kept(0), ClipVertex::Kept(2), ClipVertex::Kept(3)]);
    }

    #[test]
    fn surviving_first_vertex_stays_first() {
        let sides = [Side::StrictlyAbove, Side::StrictlyBelow, Side::StrictlyAbove, Side::StrictlyAbove];
        let out = clip_polygon_sides(&[0, 1, 2, 3], |i| sides[i]);
        assert_eq!(
            out,
            vec![
                ClipVertex::Kept(0),
                ClipVertex::Crossing { from: 0, to: 1 },
                ClipVertex::Crossing { from: 1, to: 2 },
                ClipVertex::Kept(2),
                ClipVertex::Kept(3),
            ]
        );
    }
}
