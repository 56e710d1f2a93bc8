use thiserror::Error;

use crate::geometry::{Plane, Point3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LinePlaneError {
    #[error("segment is parallel to the plane: no intersection")]
    NoIntersection,
    #[error("segment lies in the plane")]
    LineInPlane,
}

/// Parameter `t` such that `v1 + t (v2 − v1)` lies on `plane`.
///
/// `t = −N / D` with `N = n · (v1 − s)` and `D = n · (v2 − v1)`; a vanishing
/// `D` is an error because callers only pass segments that properly cross
/// the plane.
pub fn line_plane_parameter(v1: Point3, v2: Point3, plane: &Plane) -> Result<f64, LinePlaneError> {
    let num = plane.n.dot(v1 - plane.s);
    let den = plane.n.dot(v2 - v1);
    if den == 0.0 {
        return Err(if num == 0.0 { LinePlaneError::LineInPlane } else { LinePlaneError::NoIntersection });
    }
    Ok(-num / den)
}

pub fn line_plane_intersection(v1: Point3, v2: Point3, plane: &Plane) -> Result<Point3, LinePlaneError> {
    let t = line_plane_parameter(v1, v2, plane)?;
    Ok(v1 + (v2 - v1) * t)
}
