//! Deterministic synthetic model families.
//!
//! * [`gen_tet_like`]: convex hull of random points on the sphere with one
//!   vertex pulled to the centroid.
//! * [`gen_voro_like`]: convex cell of random tangent half-spaces whose
//!   largest face is fanned and its apex pulled to the centroid.
//! * [`gen_tent`]: a prism over a dart-shaped cross-section whose kernel
//!   shrinks as the parameter grows.
//! * [`gen_refined_box`]: the unit cube with midpoint-refined faces.

pub mod hull;
mod refined;
mod tent;
mod tet;
mod voro;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;
use thiserror::Error;

pub use hull::{convex_hull_3d, HullError};
pub use refined::{gen_refined_box, MAX_REFINE_DEPTH};
pub use tent::{gen_tent, tent_kernel_volume};
pub use tet::{gen_convex, gen_tet_like};
pub use voro::gen_voro_like;

use crate::geometry::{Point3, Polyhedron};
use crate::math;

/// Attempts before a randomized generator gives up.
pub const MAX_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("parameter {value} out of range for {family}: {expected}")]
    ParameterOutOfRange { family: Family, value: f64, expected: &'static str },
    #[error("no valid {family} model after {attempts} attempts")]
    RetriesExhausted { family: Family, attempts: usize },
    #[error("convex hull failed: {0}")]
    Hull(#[from] HullError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Tent,
    TetLike,
    VoroLike,
    RefinedBox,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Tent, Family::TetLike, Family::VoroLike, Family::RefinedBox];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tent => "tent",
            Family::TetLike => "tet",
            Family::VoroLike => "voro",
            Family::RefinedBox => "box",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tent" => Ok(Family::Tent),
            "tet" | "tet_like" => Ok(Family::TetLike),
            "voro" | "voro_like" => Ok(Family::VoroLike),
            "box" | "refined_box" => Ok(Family::RefinedBox),
            other => Err(alloc::format!("unknown family `{other}` (expected tent, tet, voro or box)")),
        }
    }
}

/// A family, its parameter and a seed.
///
/// The parameter is λ for the tent, the vertex count for tet-like models,
/// the half-space count for voro-like models and the depth for the refined
/// box. The seed is ignored by the deterministic families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub parameter: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Polyhedron, GeneratorError> {
        match self.family {
            Family::Tent => gen_tent(self.parameter),
            Family::TetLike => gen_tet_like(integer_param(self.family, self.parameter)?, self.seed),
            Family::VoroLike => gen_voro_like(integer_param(self.family, self.parameter)?, self.seed),
            Family::RefinedBox => gen_refined_box(integer_param(self.family, self.parameter)?),
        }
    }
}

fn integer_param(family: Family, value: f64) -> Result<usize, GeneratorError> {
    if value.is_finite() && value >= 0.0 && libm::trunc(value) == value && value <= u32::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(GeneratorError::ParameterOutOfRange { family, value, expected: "a non-negative integer" })
    }
}

/// Uniform point on the unit sphere (Archimedes' projection).
pub fn sphere_point(rng: &mut impl Rng) -> Point3 {
    let z = 2.0 * rng.gen::<f64>() - 1.0;
    let phi = 2.0 * core::f64::consts::PI * rng.gen::<f64>();
    let r = math::sqrt((1.0 - z * z).max(0.0));
    Point3::new(r * math::cos(phi), r * math::sin(phi), z)
}

pub fn sphere_points(n: usize, rng: &mut impl Rng) -> Vec<Point3> {
    (0..n).map(|_| sphere_point(rng)).collect()
}

/// Volume centroid of a closed, outward-wound polyhedron.
pub fn volume_centroid(poly: &Polyhedron) -> Point3 {
    let verts = poly.verts();
    let origin = verts.iter().fold(Point3::ZERO, |a, &v| a + v) / verts.len().max(1) as f64;
    let mut acc = Point3::ZERO;
    let mut vol = 0.0;
    for face in poly.faces() {
        let a = verts[face[0]] - origin;
        for w in face[1..].windows(2) {
            let (b, c) = (verts[w[0]] - origin, verts[w[1]] - origin);
            let v = a.dot(b.cross(c));
            vol += v;
            acc += (a + b + c) * v;
        }
    }
    if vol == 0.0 {
        return origin;
    }
    origin + acc / (4.0 * vol)
}

/// True if some vertex lies strictly outside the inward half-space of some
/// face by more than `eps`, i.e. the polyhedron is not convex.
pub fn is_nonconvex(poly: &Polyhedron, eps: f64) -> bool {
    let Ok(normals) = poly.outward_normals() else {
        return false;
    };
    poly.faces().iter().zip(&normals).any(|(f, &n)| {
        let s = poly.verts()[f[0]];
        poly.verts().iter().any(|&v| n.dot(v - s) > eps)
    })
}
