use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Family, GeneratorError};
use crate::geometry::{Face, Point3, Polyhedron};

pub const MAX_REFINE_DEPTH: usize = 6;

type Grid = [i64; 3];

/// Cube sides as (corner, u, v, outward normal) with `u × v` outward.
const SIDES: [(Grid, Grid, Grid, [f64; 3]); 6] = [
    ([0, 0, 0], [0, 0, 1], [0, 1, 0], [-1.0, 0.0, 0.0]),
    ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1.0, 0.0, 0.0]),
    ([0, 0, 0], [1, 0, 0], [0, 0, 1], [0.0, -1.0, 0.0]),
    ([0, 1, 0], [0, 0, 1], [1, 0, 0], [0.0, 1.0, 0.0]),
    ([0, 0, 0], [0, 1, 0], [1, 0, 0], [0.0, 0.0, -1.0]),
    ([0, 0, 1], [1, 0, 0], [0, 1, 0], [0.0, 0.0, 1.0]),
];

struct Refiner {
    n: i64,
    index: BTreeMap<Grid, usize>,
    verts: Vec<Point3>,
    faces: Vec<Face>,
    normals: Vec<Point3>,
}

impl Refiner {
    fn vertex(&mut self, g: Grid) -> usize {
        let n = self.n as f64;
        let verts = &mut self.verts;
        *self.index.entry(g).or_insert_with(|| {
            verts.push(Point3::new(g[0] as f64 / n, g[1] as f64 / n, g[2] as f64 / n));
            verts.len() - 1
        })
    }

    /// Emits the quad at local cell `(i, j)` of size `size`, splitting it
    /// into four children while `level > 0`.
    fn quad(&mut self, side: usize, i: i64, j: i64, size: i64, level: usize) {
        if level > 0 {
            let h = size / 2;
            for (di, dj) in [(0, 0), (h, 0), (h, h), (0, h)] {
                self.quad(side, i + di, j + dj, h, level - 1);
            }
            return;
        }
        let (corner, u, v, normal) = SIDES[side];
        let at = |a: i64, b: i64| -> Grid {
            core::array::from_fn(|k| corner[k] * self.n + u[k] * a + v[k] * b)
        };
        let corners = [at(i, j), at(i + size, j), at(i + size, j + size), at(i, j + size)];
        let face = corners.iter().map(|&g| self.vertex(g)).collect();
        self.faces.push(Face::new(face));
        self.normals.push(Point3::from(normal));
    }
}

/// Unit cube whose six faces are split 4-way at edge midpoints and face
/// centres, `depth` times: `6·4^depth` quads, all on the six cube planes.
pub fn gen_refined_box(depth: usize) -> Result<Polyhedron, GeneratorError> {
    if depth > MAX_REFINE_DEPTH {
        return Err(GeneratorError::ParameterOutOfRange {
            family: Family::RefinedBox,
            value: depth as f64,
            expected: "0 <= depth <= 6",
        });
    }
    let n = 1i64 << depth;
    let mut r = Refiner { n, index: BTreeMap::new(), verts: Vec::new(), faces: Vec::new(), normals: Vec::new() };
    for side in 0..SIDES.len() {
        r.quad(side, 0, 0, n, depth);
    }
    Ok(Polyhedron::new(r.verts, r.faces, Some(r.normals)).expect("valid by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polyhedron_volume;

    #[test]
    fn depth_zero_is_the_cube() {
        let p = gen_refined_box(0).unwrap();
        assert_eq!(p.verts().len(), 8);
        assert_eq!(p.faces().len(), 6);
        p.validate_closed().unwrap();
        assert_eq!(polyhedron_volume(&p), 1.0);
    }

    #[test]
    fn counts_follow_refinement() {
        for d in 0..=4 {
            let p = gen_refined_box(d).unwrap();
            let f = 6 * 4usize.pow(d as u32);
            assert_eq!(p.faces().len(), f);
            // closed quad mesh of genus 0: V − E + F = 2 with E = 2F
            assert_eq!(p.verts().len(), f + 2);
            p.validate_closed().unwrap();
            assert!((polyhedron_volume(&p) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn every_face_lies_on_a_cube_plane() {
        let p = gen_refined_box(2).unwrap();
        assert_eq!(p.faces().len(), 96);
        for (fi, n) in p.face_normals().unwrap().iter().enumerate() {
            let axis = n.dominant_axis();
            let level = if n[axis] > 0.0 { 1.0 } else { 0.0 };
            assert!(p.face_points(fi).all(|q| q[axis] == level));
            assert_eq!(p.newell_normals().unwrap()[fi], *n);
        }
    }

    #[test]
    fn depth_out_of_range() {
        assert!(gen_refined_box(7).is_err());
    }
}
