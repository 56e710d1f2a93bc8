use super::{GeometryError, Point3};

/// Oriented plane through `s` with unit normal `n`.
///
/// A plane doubles as the closed half-space on the side `n` points into:
/// points with positive [`signed_distance`](Plane::signed_distance) are
/// "above" the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    pub s: Point3,
    pub n: Point3,
}

impl Plane {
    /// Builds a plane, normalizing `normal`.
    pub fn new(point: Point3, normal: Point3) -> Result<Self, GeometryError> {
        let n = normal.normalized().ok_or(GeometryError::ZeroNormal)?;
        Ok(Plane { s: point, n })
    }

    /// Builds a plane from a normal that is already unit length.
    pub fn from_unit_normal(point: Point3, unit_normal: Point3) -> Self {
        debug_assert!((unit_normal.norm() - 1.0).abs() < 1e-9);
        Plane { s: point, n: unit_normal }
    }

    /// `n · (x − s)`: positive on the side the normal points toward.
    #[inline]
    pub fn signed_distance(&self, x: Point3) -> f64 {
        self.n.dot(x - self.s)
    }

    pub fn classify(&self, x: Point3, tol: &Tolerances) -> Classification {
        Classification::from_distance(self.signed_distance(x), tol.eps_classify)
    }

    pub fn flipped(&self) -> Plane {
        Plane { s: self.s, n: -self.n }
    }

    pub fn translated(&self, t: Point3) -> Plane {
        Plane { s: self.s + t, n: self.n }
    }

    /// Same oriented plane up to the given tolerances: normals agree within
    /// `normal_tol` and the offset between the two anchor points along the
    /// normal is below `offset_tol`.
    pub fn coincides_with(&self, other: &Plane, normal_tol: f64, offset_tol: f64) -> bool {
        (self.n - other.n).norm() <= normal_tol && self.n.dot(other.s - self.s).abs() < offset_tol
    }
}

/// Position of a point relative to a plane, with a tolerance dead-band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    StrictlyBelow,
    On,
    StrictlyAbove,
}

impl Side {
    #[inline]
    pub fn is_weakly_above(self) -> bool {
        self != Side::StrictlyBelow
    }

    #[inline]
    pub fn is_weakly_below(self) -> bool {
        self != Side::StrictlyAbove
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Classification {
    pub side: Side,
    pub distance: f64,
}

impl Classification {
    pub fn from_distance(distance: f64, eps: f64) -> Self {
        let side = if distance > eps {
            Side::StrictlyAbove
        } else if distance < -eps {
            Side::StrictlyBelow
        } else {
            Side::On
        };
        Classification { side, distance }
    }
}

/// Tolerances of a kernel run.
///
/// Both values are absolute lengths derived from the bounding-box diagonal
/// of the input once, before the first cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Half-width of the "on the plane" dead-band.
    pub eps_classify: f64,
    /// Radius under which two vertices are considered the same.
    pub eps_merge: f64,
}

impl Tolerances {
    pub const CLASSIFY_FACTOR: f64 = 1e-9;
    pub const MERGE_FACTOR: f64 = 10.0;

    /// `eps_classify = 1e-9 · diagonal`, `eps_merge = 10 · eps_classify`.
    ///
    /// A zero or non-finite diagonal falls back to a unit diagonal so the
    /// tolerances stay strictly positive.
    pub fn from_diagonal(diagonal: f64) -> Self {
        let diagonal = if diagonal.is_finite() && diagonal > 0.0 { diagonal } else { 1.0 };
        let eps_classify = Self::CLASSIFY_FACTOR * diagonal;
        Tolerances { eps_classify, eps_merge: Self::MERGE_FACTOR * eps_classify }
    }

    pub fn for_polyhedron(poly: &super::Polyhedron) -> Result<Self, GeometryError> {
        let aabb = super::Aabb::from_points(poly.verts())?;
        Ok(Self::from_diagonal(aabb.diagonal()))
    }

    /// Multiplies both tolerances by `factor` (the CLI `--tol-scale`).
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances { eps_classify: self.eps_classify * factor, eps_merge: self.eps_merge * factor }
    }

    /// Volume under which a clipped polyhedron counts as empty.
    pub fn eps_volume(&self) -> f64 {
        self.eps_classify * self.eps_classify * self.eps_classify
    }
}
