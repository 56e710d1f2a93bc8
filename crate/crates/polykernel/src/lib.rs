//! File formats, batch runner, benchmark harness and command-line front end
//! for `polykernel-core`.

pub mod batch;
pub mod bench;
pub mod cli;
pub mod obj;
pub mod off;

use std::io;
use std::path::{Path, PathBuf};

use polykernel_core::Polyhedron;
use thiserror::Error;

pub use batch::{run_batch, BatchOptions, BatchReport, BenchRecord};
pub use obj::parse_obj;
pub use off::{parse_off, write_off, ParseError, ParseErrorKind};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
}

/// Reads an `.obj` file as OBJ and anything else as OFF.
pub fn read_mesh(path: &Path) -> Result<Polyhedron, MeshError> {
    let text = std::fs::read_to_string(path).map_err(|source| MeshError::Io { path: path.to_path_buf(), source })?;
    let is_obj = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj"));
    let parsed = if is_obj { parse_obj(&text) } else { parse_off(&text) };
    parsed.map_err(|source| MeshError::Parse { path: path.to_path_buf(), source })
}
