//! Batch processing of a directory of meshes into timing records and CSV.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use polykernel_core::oracle::{brute_force_kernel, hausdorff_vertex_distance};
use polykernel_core::{polyhedron_kernel, Aabb, KernelResult, Polyhedron, Tolerances};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::read_mesh;

/// Kernel and oracle vertex sets agree when their Hausdorff distance is
/// below this fraction of the model's AABB diagonal.
pub const ORACLE_HAUSDORFF_FACTOR: f64 = 1e-7;

/// `model_id` of the trailing summary row.
pub const SUMMARY_ID: &str = "TOTAL";

pub const CSV_HEADER: &str = "model_id,n_vertices,n_faces,kernel_time_s,kernel_volume,is_empty,\
faces_skipped_coplanar,oracle_time_s,oracle_agrees,error";

/// One CSV row. Rows with a non-empty `error` carry zeros in the kernel
/// columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub model_id: String,
    pub n_vertices: usize,
    pub n_faces: usize,
    pub kernel_time_s: f64,
    pub kernel_volume: f64,
    pub is_empty: bool,
    pub faces_skipped_coplanar: usize,
    pub oracle_time_s: Option<f64>,
    pub oracle_agrees: Option<bool>,
    pub error: Option<String>,
}

impl BenchRecord {
    fn failed(model_id: String, n_vertices: usize, n_faces: usize, error: String) -> Self {
        BenchRecord {
            model_id,
            n_vertices,
            n_faces,
            kernel_time_s: 0.0,
            kernel_volume: 0.0,
            is_empty: false,
            faces_skipped_coplanar: 0,
            oracle_time_s: None,
            oracle_agrees: None,
            error: Some(error),
        }
    }

    /// Copy with both timing columns zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        BenchRecord { kernel_time_s: 0.0, oracle_time_s: self.oracle_time_s.map(|_| 0.0), ..self.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatchOptions {
    pub oracle: bool,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    /// Multiplier applied to the default tolerances.
    pub tol_scale: f64,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions { oracle: false, threads: 0, tol_scale: 1.0 }
    }
}

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("cannot read directory {}: {source}", path.display())]
    ReadDir { path: PathBuf, source: io::Error },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchReport {
    /// Sorted by `model_id`.
    pub records: Vec<BenchRecord>,
    /// Wall-clock time of the whole run, parsing included.
    pub wall_time_s: f64,
}

impl BatchReport {
    /// Sum of the per-model kernel times.
    pub fn total_kernel_time_s(&self) -> f64 {
        self.records.iter().map(|r| r.kernel_time_s).sum()
    }

    pub fn error_count(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }

    /// Totals over all records; `None` when there are none.
    pub fn summary(&self) -> Option<BenchRecord> {
        if self.records.is_empty() {
            return None;
        }
        let rs = &self.records;
        let oracle_times: Vec<f64> = rs.iter().filter_map(|r| r.oracle_time_s).collect();
        let verdicts: Vec<bool> = rs.iter().filter_map(|r| r.oracle_agrees).collect();
        let errors = self.error_count();
        Some(BenchRecord {
            model_id: SUMMARY_ID.to_string(),
            n_vertices: rs.iter().map(|r| r.n_vertices).sum(),
            n_faces: rs.iter().map(|r| r.n_faces).sum(),
            kernel_time_s: self.total_kernel_time_s(),
            kernel_volume: rs.iter().map(|r| r.kernel_volume).sum(),
            is_empty: rs.iter().all(|r| r.is_empty),
            faces_skipped_coplanar: rs.iter().map(|r| r.faces_skipped_coplanar).sum(),
            oracle_time_s: (!oracle_times.is_empty()).then(|| oracle_times.iter().sum()),
            oracle_agrees: (!verdicts.is_empty()).then(|| verdicts.iter().all(|&v| v)),
            error: (errors > 0).then(|| format!("{errors} of {} models failed", rs.len())),
        })
    }

    /// Writes the header, one row per record and the summary row.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), BatchError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_HEADER.split(','))?;
        for r in self.records.iter().chain(self.summary().as_ref()) {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Mesh files (`.off`, `.obj`) directly inside `dir`, sorted by name.
pub fn mesh_files(dir: &Path) -> Result<Vec<PathBuf>, BatchError> {
    let entries = fs::read_dir(dir).map_err(|source| BatchError::ReadDir { path: dir.to_path_buf(), source })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        if path.is_file() && matches!(ext.as_deref(), Some("off" | "obj")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Computes the kernel of every mesh in `dir`. Failures are recorded per
/// file and do not stop the run.
pub fn run_batch(dir: &Path, opts: &BatchOptions) -> Result<BatchReport, BatchError> {
    let start = Instant::now();
    let files = mesh_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.threads).build()?;
    let mut records: Vec<BenchRecord> = pool.install(|| files.par_iter().map(|f| process_file(f, opts)).collect());
    records.sort_by(|a, b| a.model_id.cmp(&b.model_id));
    Ok(BatchReport { records, wall_time_s: start.elapsed().as_secs_f64() })
}

fn process_file(path: &Path, opts: &BatchOptions) -> BenchRecord {
    let model_id = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    match read_mesh(path) {
        Ok(poly) => process_model(model_id, &poly, opts),
        Err(e) => BenchRecord::failed(model_id, 0, 0, e.to_string()),
    }
}

/// Times the kernel of one model and optionally checks it against the
/// brute-force oracle.
pub fn process_model(model_id: String, poly: &Polyhedron, opts: &BatchOptions) -> BenchRecord {
    let (nv, nf) = (poly.verts().len(), poly.faces().len());
    let tol = match Tolerances::for_polyhedron(poly) {
        Ok(t) => t.scaled(opts.tol_scale),
        Err(e) => return BenchRecord::failed(model_id, nv, nf, e.to_string()),
    };
    let t0 = Instant::now();
    let result = polyhedron_kernel(poly, &tol);
    let kernel_time_s = t0.elapsed().as_secs_f64();
    let k = match result {
        Ok(k) => k,
        Err(e) => return BenchRecord::failed(model_id, nv, nf, e.to_string()),
    };
    let mut record = BenchRecord {
        model_id,
        n_vertices: nv,
        n_faces: nf,
        kernel_time_s,
        kernel_volume: k.volume,
        is_empty: k.is_empty,
        faces_skipped_coplanar: k.faces_skipped_coplanar,
        oracle_time_s: None,
        oracle_agrees: None,
        error: None,
    };
    if opts.oracle {
        let t0 = Instant::now();
        match brute_force_kernel(poly, &tol) {
            Ok(o) => {
                record.oracle_time_s = Some(t0.elapsed().as_secs_f64());
                record.oracle_agrees = Some(oracle_agrees(poly, &k, &o));
            }
            Err(e) => record.error = Some(format!("oracle: {e}")),
        }
    }
    record
}

/// Same emptiness and, when non-empty, vertex sets within
/// [`ORACLE_HAUSDORFF_FACTOR`] of the AABB diagonal.
pub fn oracle_agrees(poly: &Polyhedron, kernel: &KernelResult, oracle: &KernelResult) -> bool {
    if kernel.is_empty || oracle.is_empty {
        return kernel.is_empty == oracle.is_empty;
    }
    let Ok(bounds) = Aabb::from_points(poly.verts()) else {
        return false;
    };
    hausdorff_vertex_distance(kernel.vertices(), oracle.vertices())
        .is_ok_and(|h| h < ORACLE_HAUSDORFF_FACTOR * bounds.diagonal())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, time: f64) -> BenchRecord {
        BenchRecord {
            model_id: id.into(),
            n_vertices: 8,
            n_faces: 6,
            kernel_time_s: time,
            kernel_volume: 1.0,
            is_empty: false,
            faces_skipped_coplanar: 0,
            oracle_time_s: Some(time),
            oracle_agrees: Some(true),
            error: None,
        }
    }

    fn csv(report: &BatchReport) -> String {
        let mut out = Vec::new();
        report.write_csv(&mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = BatchReport { records: vec![], wall_time_s: 0.0 };
        assert_eq!(csv(&r), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn rows_and_summary() {
        let mut bad = BenchRecord::failed("b.off".into(), 0, 0, "broken, line 3".into());
        bad.n_faces = 2;
        let r = BatchReport { records: vec![record("a.off", 0.25), bad], wall_time_s: 1.0 };
        let text = csv(&r);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "a.off,8,6,0.25,1.0,false,0,0.25,true,");
        assert_eq!(lines[2], "b.off,0,2,0.0,0.0,false,0,,,\"broken, line 3\"");
        assert_eq!(lines[3], "TOTAL,8,8,0.25,1.0,false,0,0.25,true,1 of 2 models failed");
    }

    #[test]
    fn csv_reads_back() {
        let r = BatchReport { records: vec![record("a.off", 0.5), record("b.off", 0.125)], wall_time_s: 1.0 };
        let text = csv(&r);
        let back: Vec<BenchRecord> =
            csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(&back[..2], &r.records[..]);
        assert_eq!(back[2], r.summary().unwrap());
    }
}
