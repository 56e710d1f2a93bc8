//! Read-only Wavefront OBJ support: `v` and `f` records only.

use polykernel_core::{Face, Point3, Polyhedron};

use crate::off::{build_polyhedron, content_lines, parse_f64, ParseError, ParseErrorKind};

/// Parses the vertices and polygonal faces of an OBJ file.
///
/// Face corners may use the `v`, `v/vt`, `v//vn` or `v/vt/vn` forms; only
/// the position index is used. Negative indices count back from the last
/// vertex read so far. Every other record type is ignored.
pub fn parse_obj(text: &str) -> Result<Polyhedron, ParseError> {
    let mut verts = Vec::new();
    let mut faces = Vec::new();
    let mut face_lines = Vec::new();
    let mut last = 0;
    for (l, s) in content_lines(text) {
        last = l;
        let mut toks = s.split_whitespace();
        match toks.next() {
            Some("v") => {
                let c: Vec<&str> = toks.collect();
                // A fourth `w` component is allowed and ignored.
                if !(3..=4).contains(&c.len()) {
                    return Err(ParseError::new(l, ParseErrorKind::WrongArity { expected: 3, found: c.len() }));
                }
                verts.push(Point3::new(parse_f64(c[0], l)?, parse_f64(c[1], l)?, parse_f64(c[2], l)?));
            }
            Some("f") => {
                let mut face = Vec::new();
                for corner in toks {
                    let t = corner.split('/').next().unwrap_or("");
                    let raw: i64 = t
                        .parse()
                        .map_err(|_| ParseError::new(l, ParseErrorKind::InvalidNumber(corner.to_string())))?;
                    let index = if raw < 0 { verts.len() as i64 + raw } else { raw - 1 };
                    if raw == 0 || index < 0 || index as usize >= verts.len() {
                        return Err(ParseError::new(l, ParseErrorKind::IndexOutOfRange { index: raw, len: verts.len() }));
                    }
                    face.push(index as usize);
                }
                if face.len() < 3 {
                    return Err(ParseError::new(l, ParseErrorKind::FaceTooSmall(face.len())));
                }
                faces.push(Face::new(face));
                face_lines.push(l);
            }
            _ => {}
        }
    }
    if verts.is_empty() && faces.is_empty() {
        return Ok(Polyhedron::empty());
    }
    build_polyhedron(verts, faces, &face_lines, last.max(1))
}
