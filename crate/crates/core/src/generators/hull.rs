//! Incremental 3D convex hull, adequate for the small point sets used by
//! the generators and the oracle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{Aabb, Face, Point3, Polyhedron};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("convex hull needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("points are coplanar or collinear")]
    Degenerate,
}

/// Relative tolerance for the visibility test.
const VISIBILITY_EPS: f64 = 1e-10;

struct HullFace {
    v: [usize; 3],
    n: Point3,
    offset: f64,
    alive: bool,
}

impl HullFace {
    fn new(points: &[Point3], v: [usize; 3]) -> Self {
        let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
        let n = (b - a).cross(c - a).normalized().unwrap_or(Point3::ZERO);
        HullFace { v, n, offset: n.dot(a), alive: true }
    }

    fn distance(&self, p: Point3) -> f64 {
        self.n.dot(p) - self.offset
    }
}

/// Convex hull as a closed triangulated polyhedron with outward winding and
/// normals. Only points that end up on the hull are kept, in input order.
pub fn convex_hull_3d(points: &[Point3]) -> Result<Polyhedron, HullError> {
    if points.len() < 4 {
        return Err(HullError::TooFewPoints(points.len()));
    }
    let bounds = Aabb::from_points(points).map_err(|_| HullError::Degenerate)?;
    let eps = VISIBILITY_EPS * bounds.diagonal().max(f64::MIN_POSITIVE);

    // Initial tetrahedron from extreme points.
    let i0 = (0..points.len()).min_by(|&a, &b| points[a].x.total_cmp(&points[b].x)).unwrap();
    let i1 = argmax(points, |p| p.distance(points[i0]));
    let dir = points[i1] - points[i0];
    if dir.norm() <= eps {
        return Err(HullError::Degenerate);
    }
    let i2 = argmax(points, |p| dir.cross(p - points[i0]).norm() / dir.norm());
    if dir.cross(points[i2] - points[i0]).norm() / dir.norm() <= eps {
        return Err(HullError::Degenerate);
    }
    let base = HullFace::new(points, [i0, i1, i2]);
    let i3 = argmax(points, |p| base.distance(p).abs());
    if base.distance(points[i3]).abs() <= eps {
        return Err(HullError::Degenerate);
    }

    let centroid = (points[i0] + points[i1] + points[i2] + points[i3]) * 0.25;
    let mut faces: Vec<HullFace> = Vec::new();
    for [a, b, c] in [[i0, i1, i2], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]] {
        let f = HullFace::new(points, [a, b, c]);
        faces.push(if f.distance(centroid) > 0.0 { HullFace::new(points, [a, c, b]) } else { f });
    }

    // Farthest point first keeps sliver faces out of the intermediate hulls.
    let seeds = [i0, i1, i2, i3];
    let mut pending: Vec<usize> = (0..points.len()).filter(|i| !seeds.contains(i)).collect();
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut region: BTreeSet<usize> = BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        pending.retain(|&pi| {
            let (f, d) = farthest_face(&faces, points[pi]);
            if d <= eps {
                return false;
            }
            if best.is_none_or(|(_, _, bd)| d > bd) {
                best = Some((pi, f, d));
            }
            true
        });
        let Some((pi, start, _)) = best else { break };
        pending.retain(|&q| q != pi);
        let p = points[pi];

        owner.clear();
        for (fi, f) in faces.iter().enumerate().filter(|(_, f)| f.alive) {
            for k in 0..3 {
                owner.insert((f.v[k], f.v[(k + 1) % 3]), fi);
            }
        }
        // Visible region grown from the most visible face stays connected.
        region.clear();
        region.insert(start);
        stack.clear();
        stack.push(start);
        while let Some(f) = stack.pop() {
            let v = faces[f].v;
            for k in 0..3 {
                if let Some(&g) = owner.get(&(v[(k + 1) % 3], v[k])) {
                    if !region.contains(&g) && faces[g].distance(p) > eps {
                        region.insert(g);
                        stack.push(g);
                    }
                }
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &f in &region {
            let v = faces[f].v;
            for k in 0..3 {
                let (a, b) = (v[k], v[(k + 1) % 3]);
                if owner.get(&(b, a)).is_none_or(|g| !region.contains(g)) {
                    horizon.push((a, b));
                }
            }
        }
        for &f in &region {
            faces[f].alive = false;
        }
        for (a, b) in horizon {
            faces.push(HullFace::new(points, [a, b, pi]));
        }
    }

    let alive: Vec<&HullFace> = faces.iter().filter(|f| f.alive).collect();
    let mut remap = alloc::vec![usize::MAX; points.len()];
    for f in &alive {
        for &i in &f.v {
            remap[i] = 0;
        }
    }
    let mut verts = Vec::new();
    for (i, r) in remap.iter_mut().enumerate() {
        if *r == 0 {
            *r = verts.len();
            verts.push(points[i]);
        }
    }
    let hull_faces = alive.iter().map(|f| Face::new(f.v.iter().map(|&i| remap[i]).collect())).collect();
    let normals: Vec<Point3> = alive.iter().map(|f| f.n).collect();
    if normals.contains(&Point3::ZERO) {
        return Err(HullError::Degenerate);
    }
    let hull = Polyhedron::new(verts, hull_faces, Some(normals)).map_err(|_| HullError::Degenerate)?;
    hull.validate_closed().map_err(|_| HullError::Degenerate)?;
    Ok(hull)
}

fn farthest_face(faces: &[HullFace], p: Point3) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, f) in faces.iter().enumerate().filter(|(_, f)| f.alive) {
        let d = f.distance(p);
        if d > best.1 {
            best = (i, d);
        }
    }
    best
}

fn argmax(points: &[Point3], key: impl Fn(Point3) -> f64) -> usize {
    let mut best = 0;
    let mut best_key = f64::NEG_INFINITY;
    for (i, &p) in points.iter().enumerate() {
        let k = key(p);
        if k > best_key {
            best = i;
            best_key = k;
        }
    }
    best
}
