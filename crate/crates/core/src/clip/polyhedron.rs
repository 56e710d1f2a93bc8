use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use super::line::{line_plane_intersection, LinePlaneError};
use super::polygon::{clip_polygon_sides, ClipVertex};
use crate::geometry::{newell_normal, Face, Plane, Point3, Polyhedron, Side, Tolerances};
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClipError {
    #[error("edge crossing failed: {0}")]
    LinePlane(#[from] LinePlaneError),
    #[error("cap points are collinear")]
    CollinearCap,
    #[error("cap needs at least 3 points, got {0}")]
    TooFewCapPoints(usize),
    #[error("clipped surface boundary does not form closed loops")]
    OpenBoundary,
    #[error("polyhedron to clip has no face normals")]
    MissingNormals,
}

/// Face bookkeeping of one polyhedron/plane intersection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClipStats {
    /// Faces weakly above the plane, copied as they are.
    pub kept: usize,
    /// Faces strictly below the plane.
    pub discarded: usize,
    /// Faces straddling the plane and split.
    pub split: usize,
    /// Split faces that collapsed to fewer than three distinct vertices.
    pub collapsed: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClipResult {
    /// The part of the input on the side the plane normal points into.
    /// Empty when the whole input lies strictly below the plane.
    pub above: Polyhedron,
    pub cap_face_added: bool,
    /// True when no vertex of `above` lies strictly above the plane, i.e.
    /// the kept part is flat.
    pub flat: bool,
    pub stats: ClipStats,
}

/// Assembles the clipped polyhedron with a compact vertex pool.
struct Builder<'a> {
    src: &'a Polyhedron,
    plane: &'a Plane,
    eps_merge: f64,
    sides: &'a [Side],
    remap: Vec<usize>,
    verts: Vec<Point3>,
    on_plane: Vec<usize>,
    crossings: BTreeMap<(usize, usize), usize>,
    any_above: bool,
}

impl<'a> Builder<'a> {
    fn keep(&mut self, old: usize) -> usize {
        if self.remap[old] == usize::MAX {
            let id = self.verts.len();
            self.verts.push(self.src.verts()[old]);
            self.remap[old] = id;
            match self.sides[old] {
                Side::On => self.on_plane.push(id),
                Side::StrictlyAbove => self.any_above = true,
                Side::StrictlyBelow => {}
            }
        }
        self.remap[old]
    }

    /// Crossing point of the undirected edge `{a, b}`, computed once so the
    /// two faces sharing the edge get the same vertex.
    fn crossing(&mut self, a: usize, b: usize) -> Result<usize, LinePlaneError> {
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.crossings.get(&key) {
            return Ok(id);
        }
        let p = line_plane_intersection(self.src.verts()[key.0], self.src.verts()[key.1], self.plane)?;
        // Snap to the nearest vertex within reach: any snap bends the faces
        // through the edge, so the shortest one bends them least.
        let nearest = self
            .on_plane
            .iter()
            .map(|&i| (self.verts[i].distance(p), i))
            .filter(|&(d, _)| d <= self.eps_merge)
            .min_by(|x, y| x.0.total_cmp(&y.0));
        let id = match nearest {
            Some((_, existing)) => existing,
            None => {
                let id = self.verts.len();
                self.verts.push(p);
                self.on_plane.push(id);
                id
            }
        };
        self.crossings.insert(key, id);
        Ok(id)
    }
}

/// Drops cyclically repeated consecutive indices.
fn dedup_cyclic(face: &mut Vec<usize>) {
    face.dedup();
    while face.len() > 1 && face.first() == face.last() {
        face.pop();
    }
}

/// Intersects the convex polyhedron `poly` with the half-space above
/// `plane`.
///
/// Faces strictly below are dropped, faces weakly above are copied and the
/// remaining ones are split edge by edge. The hole left behind is closed by
/// a cap face walked along its boundary edges; a tangent plane leaves no
/// hole and adds no cap.
///
/// Crossing points within `eps_merge` of a vertex already on the plane are
/// merged into it. When merging folds the surface so that no cap can close
/// it, which takes several crossings within `eps_merge` of each other, the
/// cut is redone with every crossing kept distinct.
///
/// `poly` must carry face normals; they are propagated to the result and
/// the cap receives `−plane.n`.
pub fn polyhedron_plane_intersection(
    poly: &Polyhedron,
    plane: &Plane,
    tol: &Tolerances,
) -> Result<ClipResult, ClipError> {
    let normals = poly.face_normals().ok_or(ClipError::MissingNormals)?;
    let sides: Vec<Side> = poly.verts().iter().map(|&v| plane.classify(v, tol).side).collect();

    if sides.iter().all(|&s| s == Side::StrictlyBelow) {
        let stats = ClipStats { discarded: poly.faces().len(), ..ClipStats::default() };
        return Ok(ClipResult { above: Polyhedron::empty(), cap_face_added: false, flat: true, stats });
    }

    match clip_with_merge(poly, normals, plane, &sides, tol.eps_merge) {
        Ok(r) if r.flat || r.above.validate_closed().is_ok() => Ok(r),
        Ok(_) | Err(ClipError::OpenBoundary) => clip_with_merge(poly, normals, plane, &sides, 0.0),
        Err(e) => Err(e),
    }
}

fn clip_with_merge(
    poly: &Polyhedron,
    normals: &[Point3],
    plane: &Plane,
    sides: &[Side],
    eps_merge: f64,
) -> Result<ClipResult, ClipError> {
    let mut stats = ClipStats::default();
    let mut b = Builder {
        src: poly,
        plane,
        eps_merge,
        remap: alloc::vec![usize::MAX; poly.verts().len()],
        sides,
        verts: Vec::with_capacity(poly.verts().len() + 4),
        on_plane: Vec::new(),
        crossings: BTreeMap::new(),
        any_above: false,
    };
    let mut faces = Vec::with_capacity(poly.faces().len() + 1);
    let mut face_normals = Vec::with_capacity(poly.faces().len() + 1);

    for (fi, face) in poly.faces().iter().enumerate() {
        let below = face.iter().filter(|&&i| b.sides[i] == Side::StrictlyBelow).count();
        if below == face.len() {
            stats.discarded += 1;
            continue;
        }
        let mut out = Vec::with_capacity(face.len() + 1);
        if below == 0 {
            stats.kept += 1;
            out.extend(face.iter().map(|&i| b.keep(i)));
        } else {
            stats.split += 1;
            let sides = b.sides;
            let emitted = clip_polygon_sides(face, |i| sides[i]);
            for v in emitted {
                out.push(match v {
                    ClipVertex::Kept(i) => b.keep(i),
                    ClipVertex::Crossing { from, to } => b.crossing(from, to)?,
                });
            }
            dedup_cyclic(&mut out);
            if out.len() < 3 {
                stats.collapsed += 1;
                continue;
            }
        }
        faces.push(Face::new(out));
        face_normals.push(normals[fi]);
    }

    // The cap closes the hole left by the discarded part: the boundary
    // edges of the clipped surface, walked backwards. Vertices that are
    // merely close to the plane elsewhere on the solid stay out of it.
    let flat = !b.any_above;
    let mut cap_face_added = false;
    if !flat {
        for cap in hole_loops(&faces)? {
            faces.push(Face::new(cap));
            face_normals.push(-plane.n);
            cap_face_added = true;
        }
    }

    let above = Polyhedron::from_parts(b.verts, faces, Some(face_normals));
    Ok(ClipResult { above, cap_face_added, flat, stats })
}

/// Closed vertex loops bounding the holes of an open surface, each wound
/// opposite to the faces around it so that it closes the surface.
fn hole_loops(faces: &[Face]) -> Result<Vec<Vec<usize>>, ClipError> {
    let directed: BTreeSet<(usize, usize)> = faces.iter().flat_map(|f| f.edges()).collect();
    let mut succ: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in &directed {
        if !directed.contains(&(b, a)) {
            succ.entry(b).or_default().push(a);
        }
    }
    let mut loops = Vec::new();
    while let Some((&start, _)) = succ.iter().next() {
        let mut cap = Vec::new();
        let mut cur = start;
        loop {
            let next = match succ.get_mut(&cur).and_then(Vec::pop) {
                Some(n) => n,
                None => return Err(ClipError::OpenBoundary),
            };
            if succ.get(&cur).is_some_and(Vec::is_empty) {
                succ.remove(&cur);
            }
            cap.push(cur);
            cur = next;
            if cur == start {
                break;
            }
        }
        if cap.len() >= 3 {
            loops.push(cap);
        } else {
            return Err(ClipError::OpenBoundary);
        }
    }
    Ok(loops)
}

/// Orders the points `ids` (indices into `points`, all lying on `plane`)
/// counter-clockwise around their centroid, oriented so the resulting face
/// has normal `−plane.n`, i.e. it faces out of the solid kept above the
/// plane.
///
/// The points are projected by dropping the dominant axis of the plane
/// normal; they must be in convex position.
pub fn sort_ccw_on_plane(points: &[Point3], ids: &[usize], plane: &Plane) -> Result<Face, ClipError> {
    if ids.len() < 3 {
        return Err(ClipError::TooFewCapPoints(ids.len()));
    }
    let (u, v) = match plane.n.dominant_axis() {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let (mut cu, mut cv) = (0.0, 0.0);
    for &i in ids {
        cu += points[i][u];
        cv += points[i][v];
    }
    cu /= ids.len() as f64;
    cv /= ids.len() as f64;

    let mut keyed: Vec<(f64, usize)> =
        ids.iter().map(|&i| (math::atan2(points[i][v] - cv, points[i][u] - cu), i)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut order: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();

    let poly: Vec<Point3> = order.iter().map(|&i| points[i]).collect();
    let normal = newell_normal(&poly).map_err(|_| ClipError::CollinearCap)?;
    if normal.dot(plane.n) > 0.0 {
        order.reverse();
    }
    Ok(Face::new(order))
}
