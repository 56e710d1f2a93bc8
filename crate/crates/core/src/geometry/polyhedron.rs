use alloc::vec::Vec;
use core::ops::Deref;

use super::{GeometryError, Plane, Point3};

/// Indices of a face's vertices, counter-clockwise seen from outside.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face(Vec<usize>);

impl Face {
    pub fn new(indices: Vec<usize>) -> Self {
        Face(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.0
    }

    /// Directed edges `(v[i], v[i+1])`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn reversed(&self) -> Face {
        let mut v = self.0.clone();
        v.reverse();
        Face(v)
    }

    /// Sorted copy of the indices, for order-free comparison.
    pub fn vertex_set(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }
}

impl Deref for Face {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Face {
    fn from(v: Vec<usize>) -> Self {
        Face(v)
    }
}

/// Polyhedral surface: a vertex pool, faces indexing into it and optional
/// outward unit normals (one per face).
///
/// Construction through [`Polyhedron::new`] checks indices, finiteness and
/// normals; the closed-manifold property is checked separately by
/// [`Polyhedron::validate_closed`], because intermediate structures are
/// allowed to be open.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    verts: Vec<Point3>,
    faces: Vec<Face>,
    face_normals: Option<Vec<Point3>>,
}

const UNIT_NORMAL_TOL: f64 = 1e-9;

impl Polyhedron {
    pub fn new(
        verts: Vec<Point3>,
        faces: Vec<Face>,
        face_normals: Option<Vec<Point3>>,
    ) -> Result<Self, GeometryError> {
        if let Some(i) = verts.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        let mut seen = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(GeometryError::FaceTooSmall { face: fi, len: face.len() });
            }
            seen.clear();
            seen.extend_from_slice(face);
            seen.sort_unstable();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(GeometryError::RepeatedIndex { face: fi, index: w[0] });
                }
            }
            if let Some(&index) = seen.last().filter(|&&i| i >= verts.len()) {
                return Err(GeometryError::IndexOutOfRange { face: fi, index, len: verts.len() });
            }
        }
        if let Some(normals) = &face_normals {
            if normals.len() != faces.len() {
                return Err(GeometryError::NormalCountMismatch {
                    normals: normals.len(),
                    faces: faces.len(),
                });
            }
            if let Some(i) = normals
                .iter()
                .position(|n| !n.is_finite() || (n.norm() - 1.0).abs() > UNIT_NORMAL_TOL)
            {
                return Err(GeometryError::NonUnitNormal(i));
            }
        }
        Ok(Polyhedron { verts, faces, face_normals })
    }

    /// Skips validation; callers guarantee the [`Polyhedron::new`] checks hold.
    pub(crate) fn from_parts(
        verts: Vec<Point3>,
        faces: Vec<Face>,
        face_normals: Option<Vec<Point3>>,
    ) -> Self {
        Polyhedron { verts, faces, face_normals }
    }

    /// A polyhedron with no vertices and no faces (an empty clip result).
    pub fn empty() -> Self {
        Polyhedron { verts: Vec::new(), faces: Vec::new(), face_normals: None }
    }

    pub fn verts(&self) -> &[Point3] {
        &self.verts
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_normals(&self) -> Option<&[Point3]> {
        self.face_normals.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty() || self.faces.is_empty()
    }

    pub fn face_points(&self, face: usize) -> impl Iterator<Item = Point3> + Clone + '_ {
        self.faces[face].iter().map(move |&i| self.verts[i])
    }

    pub fn without_normals(mut self) -> Self {
        self.face_normals = None;
        self
    }

    pub fn into_parts(self) -> (Vec<Point3>, Vec<Face>, Option<Vec<Point3>>) {
        (self.verts, self.faces, self.face_normals)
    }

    /// Checks that the surface is closed and consistently wound: every
    /// directed edge occurs exactly once and its reverse exactly once.
    pub fn validate_closed(&self) -> Result<(), GeometryError> {
        // (min, max, forward?, face)
        let mut edges: Vec<(usize, usize, bool, usize)> = Vec::new();
        for (fi, face) in self.faces.iter().enumerate() {
            for (a, b) in face.edges() {
                edges.push((a.min(b), a.max(b), a < b, fi));
            }
        }
        edges.sort_unstable();
        let mut i = 0;
        while i < edges.len() {
            let (a, b, _, _) = edges[i];
            let mut j = i;
            while j < edges.len() && edges[j].0 == a && edges[j].1 == b {
                j += 1;
            }
            let group = &edges[i..j];
            if group.len() != 2 {
                let face = group.iter().map(|e| e.3).max().unwrap_or(0);
                let face = if group.len() > 2 { group[2].3 } else { face };
                return Err(GeometryError::NonManifoldEdge { face, a, b, count: group.len() });
            }
            if group[0].2 == group[1].2 {
                let (ea, eb) = if group[0].2 { (a, b) } else { (b, a) };
                return Err(GeometryError::InconsistentWinding { face: group[1].3, a: ea, b: eb });
            }
            i = j;
        }
        Ok(())
    }

    /// Outward unit normal of `face`: the stored one if present, otherwise
    /// the Newell normal of its vertices.
    pub fn face_normal(&self, face: usize) -> Result<Point3, GeometryError> {
        match &self.face_normals {
            Some(n) => Ok(n[face]),
            None => newell_normal_iter(self.face_points(face)),
        }
    }

    /// Newell normals for every face.
    pub fn newell_normals(&self) -> Result<Vec<Point3>, GeometryError> {
        (0..self.faces.len()).map(|f| newell_normal_iter(self.face_points(f))).collect()
    }

    /// Outward normals for every face. Stored normals are trusted; without
    /// them the Newell normals are used, negated when the total signed
    /// volume shows the winding is inward.
    pub fn outward_normals(&self) -> Result<Vec<Point3>, GeometryError> {
        if let Some(n) = &self.face_normals {
            return Ok(n.clone());
        }
        let mut normals = self.newell_normals()?;
        if polyhedron_volume(self) < 0.0 {
            normals.iter_mut().for_each(|n| *n = -*n);
        }
        Ok(normals)
    }

    /// Returns the polyhedron with outward winding and normals attached.
    /// Faces are reversed if the signed volume is negative.
    pub fn oriented(self) -> Result<Self, GeometryError> {
        if self.face_normals.is_some() {
            return Ok(self);
        }
        let mut poly = self;
        if polyhedron_volume(&poly) < 0.0 {
            poly.faces = poly.faces.iter().map(Face::reversed).collect();
        }
        let normals = poly.newell_normals()?;
        poly.face_normals = Some(normals);
        Ok(poly)
    }

    pub fn translated(&self, t: Point3) -> Polyhedron {
        Polyhedron {
            verts: self.verts.iter().map(|&v| v + t).collect(),
            faces: self.faces.clone(),
            face_normals: self.face_normals.clone(),
        }
    }

    /// Applies `f` to every vertex. Stored normals are dropped since a
    /// general map does not preserve them.
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> Polyhedron {
        Polyhedron {
            verts: self.verts.iter().map(|&v| f(v)).collect(),
            faces: self.faces.clone(),
            face_normals: None,
        }
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    pub fn from_points(points: &[Point3]) -> Result<Self, GeometryError> {
        let (first, rest) = points.split_first().ok_or(GeometryError::EmptyVertexPool)?;
        let (min, max) = rest.iter().fold((*first, *first), |(lo, hi), &p| (lo.min(p), hi.max(p)));
        Ok(Aabb { min, max })
    }

    pub fn diagonal(&self) -> f64 {
        (self.max - self.min).norm()
    }

    pub fn extent(&self) -> Point3 {
        self.max - self.min
    }

    pub fn volume(&self) -> f64 {
        let e = self.extent();
        e.x * e.y * e.z
    }

    pub fn center(&self) -> Point3 {
        (self.min + self.max) * 0.5
    }

    /// The six box planes, oriented inward, in the order −x, +x, −y, +y, −z, +z.
    pub fn inward_planes(&self) -> [Plane; 6] {
        let (lo, hi) = (self.min, self.max);
        let ax = |x: f64, y: f64, z: f64| Point3::new(x, y, z);
        [
            Plane::from_unit_normal(lo, ax(1.0, 0.0, 0.0)),
            Plane::from_unit_normal(hi, ax(-1.0, 0.0, 0.0)),
            Plane::from_unit_normal(lo, ax(0.0, 1.0, 0.0)),
            Plane::from_unit_normal(hi, ax(0.0, -1.0, 0.0)),
            Plane::from_unit_normal(lo, ax(0.0, 0.0, 1.0)),
            Plane::from_unit_normal(hi, ax(0.0, 0.0, -1.0)),
        ]
    }

    /// The box as an 8-vertex, 6-quad polyhedron with outward normals.
    ///
    /// Vertex `i` takes the max coordinate on axis `k` when bit `k` of `i`
    /// is set.
    pub fn to_polyhedron(&self) -> Polyhedron {
        let (lo, hi) = (self.min, self.max);
        let verts = (0..8)
            .map(|i| {
                Point3::new(
                    if i & 1 != 0 { hi.x } else { lo.x },
                    if i & 2 != 0 { hi.y } else { lo.y },
                    if i & 4 != 0 { hi.z } else { lo.z },
                )
            })
            .collect();
        let quads: [([usize; 4], [f64; 3]); 6] = [
            ([0, 4, 6, 2], [-1.0, 0.0, 0.0]),
            ([1, 3, 7, 5], [1.0, 0.0, 0.0]),
            ([0, 1, 5, 4], [0.0, -1.0, 0.0]),
            ([2, 6, 7, 3], [0.0, 1.0, 0.0]),
            ([0, 2, 3, 1], [0.0, 0.0, -1.0]),
            ([4, 5, 7, 6], [0.0, 0.0, 1.0]),
        ];
        let faces = quads.iter().map(|(q, _)| Face::new(q.to_vec())).collect();
        let normals = quads.iter().map(|(_, n)| Point3::from(*n)).collect();
        Polyhedron::from_parts(verts, faces, Some(normals))
    }

    pub fn contains(&self, p: Point3, eps: f64) -> bool {
        p.x >= self.min.x - eps
            && p.y >= self.min.y - eps
            && p.z >= self.min.z - eps
            && p.x <= self.max.x + eps
            && p.y <= self.max.y + eps
            && p.z <= self.max.z + eps
    }
}

/// Bounding box of `poly` as a polyhedron (the starting kernel estimate).
pub fn compute_aabb(poly: &Polyhedron) -> Result<Polyhedron, GeometryError> {
    Ok(Aabb::from_points(poly.verts())?.to_polyhedron())
}

/// Unit normal of a polygon by Newell's method; for a counter-clockwise
/// polygon it points toward the viewer.
pub fn newell_normal(verts: &[Point3]) -> Result<Point3, GeometryError> {
    newell_normal_iter(verts.iter().copied())
}

pub(crate) fn newell_vector(points: impl Iterator<Item = Point3> + Clone) -> Point3 {
    // Reference point reduces cancellation for polygons far from the origin.
    let Some(origin) = points.clone().next() else {
        return Point3::ZERO;
    };
    let mut acc = Point3::ZERO;
    let mut it = points.clone().map(|p| p - origin);
    let Some(first) = it.next() else {
        return Point3::ZERO;
    };
    let mut prev = first;
    for cur in it.chain(core::iter::once(first)) {
        acc.x += (prev.y - cur.y) * (prev.z + cur.z);
        acc.y += (prev.z - cur.z) * (prev.x + cur.x);
        acc.z += (prev.x - cur.x) * (prev.y + cur.y);
        prev = cur;
    }
    acc
}

fn newell_normal_iter(points: impl Iterator<Item = Point3> + Clone) -> Result<Point3, GeometryError> {
    let mut count = 0usize;
    let mut scale = 0.0f64;
    if let Some(origin) = points.clone().next() {
        for p in points.clone() {
            count += 1;
            scale = scale.max((p - origin).norm());
        }
    }
    if count < 3 {
        return Err(GeometryError::DegeneratePolygon);
    }
    let v = newell_vector(points);
    // |v| is twice the polygon area; compare against the squared extent.
    // A NaN norm is degenerate as well.
    if v.norm().partial_cmp(&(1e-14 * scale * scale)) != Some(core::cmp::Ordering::Greater) {
        return Err(GeometryError::DegeneratePolygon);
    }
    v.normalized().ok_or(GeometryError::DegeneratePolygon)
}

/// Signed volume by the divergence theorem over fan-triangulated faces;
/// positive for outward winding.
pub fn polyhedron_volume(poly: &Polyhedron) -> f64 {
    let verts = poly.verts();
    if verts.is_empty() {
        return 0.0;
    }
    let origin = verts.iter().fold(Point3::ZERO, |acc, &v| acc + v) / verts.len() as f64;
    let mut six_v = 0.0;
    for face in poly.faces() {
        let a = verts[face[0]] - origin;
        for w in face[1..].windows(2) {
            let b = verts[w[0]] - origin;
            let c = verts[w[1]] - origin;
            six_v += a.dot(b.cross(c));
        }
    }
    six_v / 6.0
}

/// Plane of face `face` oriented into the polyhedron: it passes through the
/// face's first vertex with normal equal to the negated outward normal.
pub fn face_plane(poly: &Polyhedron, face: usize) -> Result<Plane, GeometryError> {
    let n = poly.face_normal(face)?;
    Ok(Plane::from_unit_normal(poly.verts()[poly.faces()[face][0]], -n))
}
