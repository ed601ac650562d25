//! Command-line front end for the `clipnoise` binary.
//!
//! Subcommands `kurtosis`, `hellinger`, `kl`, `pdf` write CSV; `beta`
//! prints the closed-form and simulated attenuation factors. Settings come
//! from flags and, optionally, a flat JSON file (`--config`) whose keys are
//! the flag names in snake_case; flags override the file.
//!
//! Exit status: 0 on success, 2 for usage, configuration or I/O errors,
//! 1 for errors raised by the computation itself.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::experiments::{
    beta_comparison, distance_sweep, kurtosis_sweep, pdf_overlay, Grid, Metric, PdfOverlay,
    SweepMetadata, SweepResult, SweepRow, SweepSpec,
};

/// Environment variable capping worker threads (0 or unset: all cores).
pub const THREADS_ENV: &str = "CLIPNOISE_THREADS";

const DEFAULT_ALPHA_GRID: &str = "0.5:5:0.5";
const DEFAULT_ALPHA2_GRID: &str = "2,3";
const DEFAULT_SAMPLES: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "clipnoise", version, about = "DCO-OFDM clipping-noise statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kurtosis of the clipped signal over a grid of clipping ratios.
    Kurtosis(Flags),
    /// Hellinger distance of simulated noise to the analytic and Gaussian-fit densities.
    Hellinger(Flags),
    /// KL divergence of simulated noise to the analytic and Gaussian-fit densities.
    Kl(Flags),
    /// Per-bin empirical, analytic and Gaussian-fit densities at one point.
    Pdf(Flags),
    /// Closed-form vs simulated attenuation factor at one point.
    Beta(Flags),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Kurtosis(_) => "kurtosis",
            Command::Hellinger(_) => "hellinger",
            Command::Kl(_) => "kl",
            Command::Pdf(_) => "pdf",
            Command::Beta(_) => "beta",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::Kurtosis(f)
            | Command::Hellinger(f)
            | Command::Kl(f)
            | Command::Pdf(f)
            | Command::Beta(f) => f,
        }
    }
}

#[derive(Debug, Args)]
struct Flags {
    /// Lower clipping ratio (single point).
    #[arg(long)]
    alpha1: Option<f64>,
    /// Upper clipping ratio (single point, or fixed value for sweeps).
    #[arg(long)]
    alpha2: Option<f64>,
    /// alpha1 grid as `start:stop:step` or a comma list.
    #[arg(long)]
    alpha_grid: Option<String>,
    /// alpha2 grid as `start:stop:step` or a comma list.
    #[arg(long)]
    alpha2_grid: Option<String>,
    /// FFT size N (power of two, >= 64).
    #[arg(long)]
    n: Option<usize>,
    /// Frames per grid point.
    #[arg(long)]
    frames: Option<u64>,
    /// Samples per grid point (rounded up to whole frames).
    #[arg(long)]
    samples: Option<u64>,
    /// QAM order (4, 16, 64, 256).
    #[arg(long)]
    qam: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Histogram bins.
    #[arg(long)]
    bins: Option<usize>,
    /// JSON config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Every run setting, as stored in a config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2_grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qam: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("RunConfig serializes")
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            alpha1: over.alpha1.or(self.alpha1),
            alpha2: over.alpha2.or(self.alpha2),
            alpha_grid: over.alpha_grid.or(self.alpha_grid),
            alpha2_grid: over.alpha2_grid.or(self.alpha2_grid),
            n: over.n.or(self.n),
            frames: over.frames.or(self.frames),
            samples: over.samples.or(self.samples),
            qam: over.qam.or(self.qam),
            seed: over.seed.or(self.seed),
            bins: over.bins.or(self.bins),
            out: over.out.or(self.out),
        }
    }
}

impl From<&Flags> for RunConfig {
    fn from(f: &Flags) -> Self {
        RunConfig {
            alpha1: f.alpha1,
            alpha2: f.alpha2,
            alpha_grid: f.alpha_grid.clone(),
            alpha2_grid: f.alpha2_grid.clone(),
            n: f.n,
            frames: f.frames,
            samples: f.samples,
            qam: f.qam,
            seed: f.seed,
            bins: f.bins,
            out: f.out.clone(),
        }
    }
}

/// Parse `start:stop:step` (endpoints included within half a step) or a
/// comma-separated list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("`{}` is not a number in grid `{text}`", s.trim()))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0 && step.is_finite()) {
                return Err(format!("grid `{text}`: step must be > 0"));
            }
            if !(start.is_finite() && stop.is_finite()) || stop < start {
                return Err(format!("grid `{text}`: need finite start <= stop"));
            }
            let count = ((stop - start) / step + 0.5).floor() as usize + 1;
            // Each point is start + i*step, rounded to 12 decimals to drop
            // accumulated binary noise (0.1 * 3 -> 0.3).
            Ok((0..count)
                .map(|i| {
                    let v = start + step * i as f64;
                    (v * 1e12).round() / 1e12
                })
                .collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(format!("grid `{text}`: expected start:stop:step or a comma list")),
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(crate::Error),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve_spec(cfg: &RunConfig, grid: Grid) -> Result<SweepSpec, Failure> {
    let n = cfg.n.unwrap_or(1024);
    if !n.is_power_of_two() || n < 64 {
        return Err(usage(format!("n: {n} must be a power of two >= 64")));
    }
    let frames = match (cfg.frames, cfg.samples) {
        (Some(_), Some(_)) => return Err(usage("frames and samples are mutually exclusive")),
        (Some(f), None) => f,
        (None, Some(s)) => SweepSpec::frames_for_samples(s, n),
        (None, None) => SweepSpec::frames_for_samples(DEFAULT_SAMPLES, n),
    };
    if frames == 0 {
        return Err(usage("frames/samples: must be >= 1"));
    }
    let spec = SweepSpec {
        grid,
        frame_len: n,
        frames,
        qam_order: cfg.qam.unwrap_or(16),
        seed: cfg.seed.unwrap_or(1),
        bins: cfg.bins.unwrap_or(200),
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}

fn grid_field(cfg_value: &Option<String>, name: &str, default: &str) -> Result<Vec<f64>, Failure> {
    parse_grid(cfg_value.as_deref().unwrap_or(default)).map_err(|e| usage(format!("{name}: {e}")))
}

fn sweep_grid(cmd: &str, cfg: &RunConfig) -> Result<Grid, Failure> {
    let alpha1 = grid_field(&cfg.alpha_grid, "alpha_grid", DEFAULT_ALPHA_GRID)?;
    let alpha2 = match (&cfg.alpha2_grid, cfg.alpha2) {
        (Some(_), Some(_)) => return Err(usage("alpha2 and alpha2_grid are mutually exclusive")),
        (Some(_), None) => Some(grid_field(&cfg.alpha2_grid, "alpha2_grid", "")?),
        (None, Some(a2)) => Some(vec![a2]),
        (None, None) if cmd == "kurtosis" => None,
        (None, None) => Some(parse_grid(DEFAULT_ALPHA2_GRID).expect("default grid parses")),
    };
    Ok(match alpha2 {
        None => Grid::Diagonal(alpha1),
        Some(alpha2) => Grid::Product { alpha1, alpha2 },
    })
}

fn point(cfg: &RunConfig) -> Result<(f64, f64), Failure> {
    match (cfg.alpha1, cfg.alpha2) {
        (Some(a1), Some(a2)) => Ok((a1, a2)),
        _ => Err(usage("this command needs --alpha1 and --alpha2")),
    }
}

fn header(command: &str, cfg: &RunConfig, meta: &SweepMetadata, notes: &[String]) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "# clipnoise {}", meta.tool_version);
    let _ = writeln!(h, "# command: {command}");
    let _ = writeln!(h, "# config: {}", cfg.to_json());
    let _ = writeln!(
        h,
        "# seed: {} | n: {} | qam: {} | frames_per_point: {} | samples_per_point: {} | bins: {}",
        meta.seed, meta.frame_len, meta.qam_order, meta.frames_per_point, meta.samples_per_point, meta.bins
    );
    for note in notes {
        let _ = writeln!(h, "# note: {note}");
    }
    let _ = writeln!(h, "# generated_unix: {}", meta.timestamp);
    h
}

fn sweep_csv(command: &str, cfg: &RunConfig, r: &SweepResult) -> String {
    let mut out = header(command, cfg, &r.metadata, &r.notes);
    let _ = writeln!(out, "alpha1,alpha2,{}", r.columns.join(","));
    for row in &r.rows {
        let _ = write!(out, "{},{}", row.alpha1, row.alpha2);
        for v in &row.values {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

fn overlay_csv(cfg: &RunConfig, o: &PdfOverlay) -> String {
    let mut out = header("pdf", cfg, &o.metadata, &[]);
    out.push_str("z,q_empirical,g1_analytic,g2_gaussfit\n");
    for r in &o.rows {
        let _ = writeln!(out, "{},{},{},{}", r.z, r.q_empirical, r.g1_analytic, r.g2_gaussfit);
    }
    out
}

/// Write `text` to `path` via a sibling temp file and rename, so a failed
/// run never leaves a partial file behind.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => write_atomic(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("{THREADS_ENV}: `{v}` is not a non-negative integer")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| usage(format!("cannot start thread pool: {e}")))
}

fn execute(command: &Command) -> Result<(), Failure> {
    let name = command.name();
    let flags = command.flags();
    let file_cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
            RunConfig::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    let cfg = file_cfg.overlay(RunConfig::from(flags));
    let pool = thread_pool()?;

    match command {
        Command::Kurtosis(_) | Command::Hellinger(_) | Command::Kl(_) => {
            let spec = resolve_spec(&cfg, sweep_grid(name, &cfg)?)?;
            let result = pool.install(|| match command {
                Command::Kurtosis(_) => kurtosis_sweep(&spec),
                Command::Hellinger(_) => distance_sweep(&spec, Metric::Hellinger),
                _ => distance_sweep(&spec, Metric::Kl),
            })?;
            for note in &result.notes {
                eprintln!("warning: {note}");
            }
            emit(&cfg, &sweep_csv(name, &cfg, &result))
        }
        Command::Pdf(_) => {
            let (a1, a2) = point(&cfg)?;
            let spec = resolve_spec(&cfg, Grid::Diagonal(vec![a1, a2]))?;
            let overlay = pool.install(|| pdf_overlay(a1, a2, &spec))?;
            emit(&cfg, &overlay_csv(&cfg, &overlay))
        }
        Command::Beta(_) => {
            let (a1, a2) = point(&cfg)?;
            let spec = resolve_spec(&cfg, Grid::Diagonal(vec![a1, a2]))?;
            let (analytic, empirical) = pool.install(|| beta_comparison(&spec, a1, a2))?;
            println!(
                "alpha1={a1} alpha2={a2} beta_analytic={analytic} beta_empirical={empirical} samples={}",
                spec.samples_per_point()
            );
            if cfg.out.is_some() {
                let table = SweepResult {
                    columns: vec!["beta_analytic", "beta_empirical"],
                    rows: vec![SweepRow {
                        alpha1: a1,
                        alpha2: a2,
                        values: vec![analytic, empirical],
                    }],
                    metadata: SweepMetadata::for_spec(&spec),
                    notes: Vec::new(),
                };
                emit(&cfg, &sweep_csv(name, &cfg, &table))?;
            }
            Ok(())
        }
    }
}

/// Parse `argv` (including the program name), run, and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("clipnoise: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            eprintln!("clipnoise: {e}");
            1
        }
    }
}
