//! Dataset generation, benchmark runs and the kernel-time scaling fit.

use std::fs;
use std::io::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use polykernel_core::generators::{gen_refined_box, Family, GeneratorError, GeneratorSpec};
use polykernel_core::{polyhedron_kernel, KernelError, Polyhedron, Tolerances};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::batch::{run_batch, BatchError, BatchOptions, BatchReport};
use crate::off::write_off;

/// Seed used when neither `--seed` nor `POLYKERNEL_SEED` is given.
pub const DEFAULT_SEED: u64 = 0;

/// Published wall time for a batch of 1000 tet10 models, for context only.
pub const REFERENCE_TET10_SECONDS: f64 = 0.29;

/// Depths of the refined-box series used for the scaling fit.
pub const SCALING_DEPTHS: std::ops::RangeInclusive<usize> = 1..=5;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot generate {file}: {source}")]
    Generate { file: String, source: GeneratorError },
    #[error(transparent)]
    Batch(#[from] BatchError),
    #[error("kernel failed during scaling fit: {0}")]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("manifest output failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid dataset `{0}`, expected FAMILY or FAMILY:PARAM")]
    BadDataset(String),
}

/// One line of `manifest.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub family: String,
    pub param: f64,
    pub seed: u64,
    pub n_vertices: usize,
    pub n_faces: usize,
}

/// A family with its parameter, written `tet:20` or just `tet`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dataset {
    pub family: Family,
    pub param: f64,
}

impl Dataset {
    pub fn default_param(family: Family) -> f64 {
        match family {
            Family::Tent => 0.5,
            Family::TetLike => 10.0,
            Family::VoroLike => 8.0,
            Family::RefinedBox => 3.0,
        }
    }

    /// Short label such as `tet10` or `tent0.5`.
    pub fn label(&self) -> String {
        format!("{}{}", self.family.name(), self.param)
    }
}

impl FromStr for Dataset {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BenchError::BadDataset(s.to_string());
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p.parse::<f64>().map_err(|_| bad())?)),
            None => (s, None),
        };
        let family: Family = name.parse().map_err(|_| bad())?;
        Ok(Dataset { family, param: param.unwrap_or_else(|| Dataset::default_param(family)) })
    }
}

/// Writes `count` models as `<family>_<i>.off` into `dir` together with a
/// `manifest.jsonl`. Model `i` uses seed `seed + i`.
pub fn generate_dataset(
    dir: &Path,
    dataset: Dataset,
    count: usize,
    seed: u64,
) -> Result<Vec<ManifestEntry>, BenchError> {
    fs::create_dir_all(dir)?;
    let mut manifest = Vec::with_capacity(count);
    for i in 0..count {
        let file = format!("{}_{i}.off", dataset.family.name());
        let model_seed = seed.wrapping_add(i as u64);
        let spec = GeneratorSpec { family: dataset.family, parameter: dataset.param, seed: model_seed };
        let poly = spec.generate().map_err(|source| BenchError::Generate { file: file.clone(), source })?;
        fs::write(dir.join(&file), write_off(&poly))?;
        manifest.push(ManifestEntry {
            file,
            family: dataset.family.name().to_string(),
            param: dataset.param,
            seed: model_seed,
            n_vertices: poly.verts().len(),
            n_faces: poly.faces().len(),
        });
    }
    let mut out = io::BufWriter::new(fs::File::create(dir.join("manifest.jsonl"))?);
    for entry in &manifest {
        serde_json::to_writer(&mut out, entry)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(manifest)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    /// `(n_vertices, seconds per kernel)` per depth.
    pub samples: Vec<(usize, f64)>,
    /// Least-squares slope of ln(time) against ln(n_vertices).
    pub slope: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fastest single kernel time over repeated runs lasting at least `budget`
/// (and at least three runs).
pub fn time_kernel(poly: &Polyhedron, budget: Duration) -> Result<f64, KernelError> {
    let tol = Tolerances::for_polyhedron(poly)?;
    let start = Instant::now();
    let mut best = f64::INFINITY;
    let mut runs = 0;
    while runs < 3 || start.elapsed() < budget {
        let t0 = Instant::now();
        let k = polyhedron_kernel(poly, &tol)?;
        best = best.min(t0.elapsed().as_secs_f64());
        std::hint::black_box(k);
        runs += 1;
    }
    Ok(best)
}

/// Times the kernel of the refined box at each of [`SCALING_DEPTHS`] and
/// fits the growth exponent.
pub fn scaling_fit(budget_per_depth: Duration) -> Result<ScalingFit, BenchError> {
    let mut samples = Vec::new();
    for depth in SCALING_DEPTHS {
        let poly = gen_refined_box(depth)
            .map_err(|source| BenchError::Generate { file: format!("box depth {depth}"), source })?;
        samples.push((poly.verts().len(), time_kernel(&poly, budget_per_depth)?));
    }
    let points: Vec<(f64, f64)> = samples.iter().map(|&(n, t)| (n as f64, t)).collect();
    Ok(ScalingFit { slope: log_log_slope(&points), samples })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchOptions {
    pub datasets: Vec<Dataset>,
    pub count: usize,
    pub seed: u64,
    pub batch: BatchOptions,
    pub scaling_budget: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    /// One batch per dataset, in the requested order.
    pub datasets: Vec<(Dataset, BatchReport)>,
    pub scaling: ScalingFit,
}

impl BenchReport {
    /// All records, `model_id` prefixed with the dataset label.
    pub fn combined(&self) -> BatchReport {
        let mut records = Vec::new();
        let mut wall = 0.0;
        for (d, r) in &self.datasets {
            wall += r.wall_time_s;
            records.extend(r.records.iter().map(|rec| {
                let mut rec = rec.clone();
                rec.model_id = format!("{}/{}", d.label(), rec.model_id);
                rec
            }));
        }
        BatchReport { records, wall_time_s: wall }
    }

    /// Human-readable per-dataset table plus the scaling fit.
    pub fn write_summary<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{:<12} {:>7} {:>10} {:>14} {:>8} {:>7}", "dataset", "models", "#vertices", "kernel time s", "empty", "errors")?;
        for (d, r) in &self.datasets {
            let n = r.records.len().max(1);
            let mean_v = r.records.iter().map(|x| x.n_vertices).sum::<usize>() as f64 / n as f64;
            let empty = r.records.iter().filter(|x| x.is_empty).count();
            writeln!(
                out,
                "{:<12} {:>7} {:>10.1} {:>14.6} {:>8} {:>7}",
                d.label(),
                r.records.len(),
                mean_v,
                r.total_kernel_time_s(),
                empty,
                r.error_count()
            )?;
            if d.family == Family::TetLike && d.param == 10.0 {
                let scaled = r.total_kernel_time_s() * 1000.0 / n as f64;
                writeln!(
                    out,
                    "  per 1000 models: {scaled:.4} s (published reference {REFERENCE_TET10_SECONDS} s, different hardware)"
                )?;
            }
        }
        writeln!(out, "scaling (refined box):")?;
        for (n, t) in &self.scaling.samples {
            writeln!(out, "  {n:>8} vertices  {t:.3e} s")?;
        }
        writeln!(out, "  log-log slope {:.3}", self.scaling.slope)
    }
}

/// Generates every dataset under `work_dir`, runs the batch on each and
/// fits the scaling exponent.
pub fn run_bench(work_dir: &Path, opts: &BenchOptions) -> Result<BenchReport, BenchError> {
    let mut datasets = Vec::new();
    for &d in &opts.datasets {
        let dir = work_dir.join(d.label());
        generate_dataset(&dir, d, opts.count, opts.seed)?;
        datasets.push((d, run_batch(&dir, &opts.batch)?));
    }
    Ok(BenchReport { datasets, scaling: scaling_fit(opts.scaling_budget)? })
}
