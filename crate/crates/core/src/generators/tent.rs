use alloc::vec::Vec;

use super::{Family, GeneratorError};
use crate::geometry::{Face, Point3, Polyhedron};

/// Prism over the dart with corners `(0,0)`, `(1,λ)`, `(2,0)`, `(1,1)`,
/// extruded over `z ∈ [0, 1]`.
///
/// The corner `(1,λ)` is reflex. The kernel is the prism over the kite
/// bounded by the four edge lines, with area `(1−λ)²/(1+λ)`; it shrinks
/// monotonically and vanishes as `λ → 1`.
pub fn gen_tent(lambda: f64) -> Result<Polyhedron, GeneratorError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(GeneratorError::ParameterOutOfRange {
            family: Family::Tent,
            value: lambda,
            expected: "0 < lambda < 1",
        });
    }
    let section = [(0.0, 0.0), (1.0, lambda), (2.0, 0.0), (1.0, 1.0)];
    let verts: Vec<Point3> = [0.0, 1.0]
        .iter()
        .flat_map(|&z| section.iter().map(move |&(x, y)| Point3::new(x, y, z)))
        .collect();

    let mut faces = alloc::vec![Face::new(alloc::vec![3, 2, 1, 0]), Face::new(alloc::vec![4, 5, 6, 7])];
    let mut normals = alloc::vec![Point3::new(0.0, 0.0, -1.0), Point3::new(0.0, 0.0, 1.0)];
    for i in 0..4 {
        let j = (i + 1) % 4;
        faces.push(Face::new(alloc::vec![i, j, j + 4, i + 4]));
        let (a, b) = (verts[i], verts[j]);
        let outward = Point3::new(b.y - a.y, a.x - b.x, 0.0);
        normals.push(outward.normalized().expect("distinct section corners"));
    }
    Ok(Polyhedron::new(verts, faces, Some(normals)).expect("valid by construction"))
}

/// Analytic kernel volume of [`gen_tent`].
pub fn tent_kernel_volume(lambda: f64) -> f64 {
    (1.0 - lambda) * (1.0 - lambda) / (1.0 + lambda)
}
