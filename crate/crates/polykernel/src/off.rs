//! ASCII OFF reading and writing.
//!
//! Coordinates are written with 17 significant digits, which is enough for
//! every `f64` to survive a write/parse cycle unchanged.

use std::fmt::Write as _;

use polykernel_core::{Face, GeometryError, Point3, Polyhedron};
use thiserror::Error;

/// Mesh parse failure, tagged with the 1-based line it was detected on.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}, line {line}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: expected `OFF`, found `{0}`")]
    MalformedHeader(String),
    #[error("malformed counts line, expected `V F E`")]
    MalformedCounts,
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("expected {expected} values, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("count mismatch: header declares {declared} {what}, file has {found}")]
    CountMismatch { what: &'static str, declared: usize, found: usize },
    #[error("index out of range: {index} (vertex count {len})")]
    IndexOutOfRange { index: i64, len: usize },
    #[error("mesh has vertices but no faces")]
    NoFaces,
    #[error("face needs at least 3 vertices, has {0}")]
    FaceTooSmall(usize),
    #[error("non-manifold edge ({a}, {b}) used by {count} faces")]
    NonManifoldEdge { a: usize, b: usize, count: usize },
    #[error("inconsistent winding across edge ({a}, {b})")]
    InconsistentWinding { a: usize, b: usize },
    #[error("invalid geometry: {0}")]
    Geometry(GeometryError),
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

/// Non-blank lines with `#` comments stripped, paired with line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_f64(tok: &str, line: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError::new(line, ParseErrorKind::InvalidNumber(tok.to_string()))),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| ParseError::new(line, ParseErrorKind::InvalidNumber(tok.to_string())))
}

/// Parses an ASCII OFF mesh.
///
/// The result is validated as a closed, consistently wound 2-manifold and
/// carries outward Newell normals. The `OFF\n0 0 0\n` sentinel parses to
/// the empty polyhedron.
pub fn parse_off(text: &str) -> Result<Polyhedron, ParseError> {
    let mut lines = content_lines(text);
    let last_line = text.lines().count().max(1);
    let eof = |what, declared, found| {
        ParseError::new(last_line, ParseErrorKind::CountMismatch { what, declared, found })
    };

    let (hline, header) = lines.next().ok_or_else(|| {
        ParseError::new(1, ParseErrorKind::MalformedHeader(String::new()))
    })?;
    let mut htoks = header.split_whitespace();
    if htoks.next() != Some("OFF") {
        return Err(ParseError::new(hline, ParseErrorKind::MalformedHeader(header.to_string())));
    }
    // Counts may share the header line.
    let rest: Vec<&str> = htoks.collect();
    let (cline, counts) = if rest.is_empty() {
        let (l, c) = lines.next().ok_or_else(|| ParseError::new(last_line, ParseErrorKind::MalformedCounts))?;
        (l, c.split_whitespace().collect::<Vec<_>>())
    } else {
        (hline, rest)
    };
    if counts.len() != 3 {
        return Err(ParseError::new(cline, ParseErrorKind::MalformedCounts));
    }
    let nv = parse_usize(counts[0], cline)?;
    let nf = parse_usize(counts[1], cline)?;

    let mut verts = Vec::with_capacity(nv);
    for i in 0..nv {
        let (l, s) = lines.next().ok_or_else(|| eof("vertices", nv, i))?;
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(ParseError::new(l, ParseErrorKind::WrongArity { expected: 3, found: toks.len() }));
        }
        verts.push(Point3::new(parse_f64(toks[0], l)?, parse_f64(toks[1], l)?, parse_f64(toks[2], l)?));
    }

    let mut faces = Vec::with_capacity(nf);
    let mut face_lines = Vec::with_capacity(nf);
    for i in 0..nf {
        let (l, s) = lines.next().ok_or_else(|| eof("faces", nf, i))?;
        let mut toks = s.split_whitespace();
        let k = parse_usize(toks.next().unwrap_or(""), l)?;
        let idx: Vec<&str> = toks.collect();
        // Trailing color values are allowed after the indices.
        if idx.len() < k {
            return Err(ParseError::new(l, ParseErrorKind::WrongArity { expected: k, found: idx.len() }));
        }
        let mut face = Vec::with_capacity(k);
        for t in &idx[..k] {
            let index = t
                .parse::<i64>()
                .map_err(|_| ParseError::new(l, ParseErrorKind::InvalidNumber(t.to_string())))?;
            if index < 0 || index as usize >= nv {
                return Err(ParseError::new(l, ParseErrorKind::IndexOutOfRange { index, len: nv }));
            }
            face.push(index as usize);
        }
        faces.push(Face::new(face));
        face_lines.push(l);
    }
    if let Some((l, _)) = lines.next() {
        return Err(ParseError::new(l, ParseErrorKind::CountMismatch { what: "faces", declared: nf, found: nf + 1 }));
    }

    if nv == 0 && nf == 0 {
        return Ok(Polyhedron::empty());
    }
    build_polyhedron(verts, faces, &face_lines, cline)
}

/// Validates raw mesh data and attaches outward normals. `face_lines[i]` is
/// the line face `i` was read from; `fallback` is used for errors that have
/// no face.
pub(crate) fn build_polyhedron(
    verts: Vec<Point3>,
    faces: Vec<Face>,
    face_lines: &[usize],
    fallback: usize,
) -> Result<Polyhedron, ParseError> {
    if faces.is_empty() {
        return Err(ParseError::new(fallback, ParseErrorKind::NoFaces));
    }
    let at = |face: usize| face_lines.get(face).copied().unwrap_or(fallback);
    let convert = |e: GeometryError| match e {
        GeometryError::FaceTooSmall { face, len } => ParseError::new(at(face), ParseErrorKind::FaceTooSmall(len)),
        GeometryError::IndexOutOfRange { face, index, len } => {
            ParseError::new(at(face), ParseErrorKind::IndexOutOfRange { index: index as i64, len })
        }
        GeometryError::NonManifoldEdge { face, a, b, count } => {
            ParseError::new(at(face), ParseErrorKind::NonManifoldEdge { a, b, count })
        }
        GeometryError::InconsistentWinding { face, a, b } => {
            ParseError::new(at(face), ParseErrorKind::InconsistentWinding { a, b })
        }
        GeometryError::RepeatedIndex { face, .. } => ParseError::new(at(face), ParseErrorKind::Geometry(e)),
        other => ParseError::new(fallback, ParseErrorKind::Geometry(other)),
    };
    let poly = Polyhedron::new(verts, faces, None).map_err(convert)?;
    poly.validate_closed().map_err(convert)?;
    poly.oriented().map_err(convert)
}

/// Serializes `poly` as ASCII OFF. An empty polyhedron becomes
/// `OFF\n0 0 0\n`.
pub fn write_off(poly: &Polyhedron) -> String {
    if poly.is_empty() {
        return "OFF\n0 0 0\n".to_string();
    }
    let edges = poly.faces().iter().map(|f| f.len()).sum::<usize>() / 2;
    let mut out = String::new();
    let _ = writeln!(out, "OFF\n{} {} {}", poly.verts().len(), poly.faces().len(), edges);
    for v in poly.verts() {
        let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", v.x, v.y, v.z);
    }
    for f in poly.faces() {
        let _ = write!(out, "{}", f.len());
        for i in f.iter() {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    out
}
