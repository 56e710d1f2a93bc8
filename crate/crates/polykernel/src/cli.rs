//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 for bad input or usage, 2 when the kernel
//! reports an internal invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use polykernel_core::generators::Family;
use polykernel_core::{polyhedron_kernel, KernelError, Polyhedron, Tolerances};

use crate::batch::{run_batch, BatchOptions};
use crate::bench::{generate_dataset, run_bench, BenchOptions, Dataset, DEFAULT_SEED};
use crate::{read_mesh, write_off};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "polykernel", version, about = "Geometric kernel of simple polyhedra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the kernel of one OFF or OBJ model.
    Kernel {
        /// Input mesh; `.obj` is read as OBJ, anything else as OFF.
        input: PathBuf,
        /// Write the kernel as OFF here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Multiplier for the bounding-box based tolerances.
        #[arg(long, default_value_t = 1.0, value_parser = parse_tol_scale)]
        tol_scale: f64,
        /// Print kernel statistics to stdout.
        #[arg(long)]
        stats: bool,
    },
    /// Compute kernels for every model in a directory.
    Batch {
        /// Directory scanned (not recursively) for .off and .obj files.
        dir: PathBuf,
        /// Cross-check every model against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        run: RunArgs,
        /// Write the results table here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Generate synthetic models as OFF files plus manifest.jsonl.
    Gen {
        /// One of tent, tet, voro or box.
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// λ for tent, vertex count for tet, half-space count for voro,
        /// refinement depth for box.
        #[arg(long)]
        param: f64,
        /// Number of models; model i uses seed + i.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Output directory, created if missing.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate datasets, run batches on them and fit the scaling exponent.
    Bench {
        /// Comma-separated FAMILY[:PARAM] list.
        #[arg(long, value_delimiter = ',', default_value = "tet:10,tet:20,tet:30,voro:8,tent:0.5,box:3")]
        families: Vec<Dataset>,
        /// Models per dataset.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Cross-check every model against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        seed: SeedArg,
        #[command(flatten)]
        run: RunArgs,
        /// Write the combined results table here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Where to write the generated models; a temporary directory is
        /// used and removed otherwise.
        #[arg(long)]
        work_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Multiplier for the bounding-box based tolerances.
    #[arg(long, default_value_t = 1.0, value_parser = parse_tol_scale)]
    pub tol_scale: f64,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Base seed for the random families.
    #[arg(long, env = "POLYKERNEL_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn parse_tol_scale(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

impl clap::builder::ValueParserFactory for Dataset {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Dataset>().map_err(|e| e.to_string()))
    }
}

/// Failure of a subcommand, split by exit code.
#[derive(Debug)]
enum Failure {
    Input(String),
    Invariant(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<KernelError> for Failure {
    fn from(e: KernelError) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Invariant(e.to_string())
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Invariant(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INVARIANT
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Kernel { input, output, tol_scale, stats } => kernel(&input, output, tol_scale, stats, out),
        Command::Batch { dir, oracle, run, csv } => {
            let opts = BatchOptions { oracle, threads: run.threads, tol_scale: run.tol_scale };
            let report = run_batch(&dir, &opts).map_err(Failure::input)?;
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                    report.write_csv(std::io::BufWriter::new(file)).map_err(Failure::input)?;
                }
                None => report.write_csv(&mut *out).map_err(Failure::input)?,
            }
            let _ = writeln!(
                err,
                "{} models, {} errors, kernel time {:.6} s, wall time {:.3} s",
                report.records.len(),
                report.error_count(),
                report.total_kernel_time_s(),
                report.wall_time_s
            );
            Ok(())
        }
        Command::Gen { family, param, count, seed, output } => {
            let entries = generate_dataset(&output, Dataset { family, param }, count, seed.seed).map_err(Failure::input)?;
            let _ = writeln!(out, "wrote {} models to {}", entries.len(), output.display());
            Ok(())
        }
        Command::Bench { families, count, oracle, seed, run, csv, work_dir } => {
            let opts = BenchOptions {
                datasets: families,
                count,
                seed: seed.seed,
                batch: BatchOptions { oracle, threads: run.threads, tol_scale: run.tol_scale },
                scaling_budget: Duration::from_millis(200),
            };
            let (dir, cleanup) = match work_dir {
                Some(d) => (d, false),
                None => (std::env::temp_dir().join(format!("polykernel-bench-{}", std::process::id())), true),
            };
            let result = run_bench(&dir, &opts);
            if cleanup {
                let _ = fs::remove_dir_all(&dir);
            }
            let report = result.map_err(Failure::input)?;
            let combined = report.combined();
            if let Some(path) = csv {
                let file = fs::File::create(&path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                combined.write_csv(std::io::BufWriter::new(file)).map_err(Failure::input)?;
            }
            report.write_summary(&mut *out).map_err(Failure::input)
        }
    }
}

fn kernel(
    input: &std::path::Path,
    output: Option<PathBuf>,
    tol_scale: f64,
    stats: bool,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let poly = read_mesh(input).map_err(Failure::input)?;
    let tol = Tolerances::for_polyhedron(&poly).map_err(Failure::input)?.scaled(tol_scale);
    let t0 = Instant::now();
    let k = polyhedron_kernel(&poly, &tol)?;
    let elapsed = t0.elapsed().as_secs_f64();
    let empty = Polyhedron::empty();
    let kernel = k.kernel.as_ref().unwrap_or(&empty);
    let text = write_off(kernel);
    match output {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None if !stats => out.write_all(text.as_bytes()).map_err(Failure::input)?,
        None => {}
    }
    if stats {
        let _ = writeln!(out, "input vertices: {}", poly.verts().len());
        let _ = writeln!(out, "input faces: {}", poly.faces().len());
        let _ = writeln!(out, "kernel vertices: {}", kernel.verts().len());
        let _ = writeln!(out, "kernel faces: {}", kernel.faces().len());
        let _ = writeln!(out, "kernel volume: {:.17e}", k.volume);
        let _ = writeln!(out, "empty: {}", k.is_empty);
        let _ = writeln!(out, "cuts: {}", k.cuts_performed);
        let _ = writeln!(out, "coplanar faces skipped: {}", k.faces_skipped_coplanar);
        let _ = writeln!(out, "kernel time s: {elapsed:.6e}");
    }
    Ok(())
}
