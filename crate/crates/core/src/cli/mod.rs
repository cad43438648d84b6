//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 input I/O, 3 PGM parse, 4 degenerate
//! input (no usable threshold, image too small), 5 output not writable.

pub mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::baselines::{
    log_edges, sobel_edges, DEFAULT_LOG_SIGMA, DEFAULT_SOBEL_SCALE, DEFAULT_ZERO_CROSSING_THRESHOLD,
};
use crate::edgemap::{detect_hybrid, select_thresholds, EdgeMap, DEFAULT_Q};
use crate::error::Error;
use crate::histogram::build_histogram;
use crate::imgio::{read_pgm, render_edges, write_pgm, GrayImage};

pub use bench::{cmd_bench, BenchOptions, BenchRow, PhaseTimes, TimingRecord};

#[derive(Debug, Parser)]
#[command(name = "hybrid-edge", version, about = "Hybrid entropic edge detection for PGM images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct QArgs {
    /// Entropic index for the local thresholds, in (0, 1) unless --allow-any-q.
    #[arg(long, default_value_t = DEFAULT_Q)]
    pub q: f64,
    /// Accept any q > 0 except 1.
    #[arg(long)]
    pub allow_any_q: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct BaselineArgs {
    /// Sobel cutoff as a multiple of the mean gradient magnitude.
    #[arg(long, default_value_t = DEFAULT_SOBEL_SCALE)]
    pub scale: f64,
    /// Gaussian sigma of the LoG kernel.
    #[arg(long, default_value_t = DEFAULT_LOG_SIGMA)]
    pub sigma: f64,
    /// Minimum response difference across a LoG zero crossing.
    #[arg(long, default_value_t = DEFAULT_ZERO_CROSSING_THRESHOLD)]
    pub zc_thresh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineMethod {
    Sobel,
    Log,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the hybrid thresholds t1, t2, t3 as key=value lines.
    Threshold {
        input: PathBuf,
        #[command(flatten)]
        q: QArgs,
    },
    /// Write the hybrid edge map as a PGM image.
    Edges {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        q: QArgs,
    },
    /// Write a Sobel or LoG edge map as a PGM image.
    Baseline {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        method: BaselineMethod,
        #[command(flatten)]
        params: BaselineArgs,
    },
    /// Time hybrid, Sobel and LoG on each input and write a CSV summary.
    Bench {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long)]
        csv: PathBuf,
        #[command(flatten)]
        q: QArgs,
        #[command(flatten)]
        params: BaselineArgs,
        /// Also print every individual run time.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: crate::imgio::PgmError },
    #[error("{0}")]
    Degenerate(Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input { .. } => 2,
            CliError::Parse { .. } => 3,
            CliError::Degenerate(_) => 4,
            CliError::Output { .. } => 5,
        }
    }

    /// Short machine-readable tag, used in benchmark error rows.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage_error",
            CliError::Input { .. } => "io_error",
            CliError::Parse { .. } => "parse_error",
            CliError::Degenerate(_) => "degenerate_input",
            CliError::Output { .. } => "output_error",
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => CliError::Usage(msg),
            Error::InvalidIndex(_) | Error::ShannonLimit => CliError::Usage(e.to_string()),
            other => CliError::Degenerate(other),
        }
    }
}

/// Validates the entropic index: `(0, 1)` by default, any positive value
/// other than 1 with `allow_any`.
pub fn check_q(q: f64, allow_any: bool) -> Result<f64, CliError> {
    let ok = if allow_any { q.is_finite() && q > 0.0 && q != 1.0 } else { q > 0.0 && q < 1.0 };
    if ok {
        Ok(q)
    } else if allow_any {
        Err(CliError::Usage(format!("--q must be positive and not 1, got {q}")))
    } else {
        Err(CliError::Usage(format!("--q must lie in (0, 1), got {q}; pass --allow-any-q to override")))
    }
}

pub fn load_image(path: &Path) -> Result<GrayImage, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Input { path: path.into(), source })?;
    read_pgm(&bytes).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn save_edges(path: &Path, edges: &EdgeMap) -> Result<(), CliError> {
    fs::write(path, write_pgm(&render_edges(edges)))
        .map_err(|source| CliError::Output { path: path.into(), source })
}

pub fn cmd_threshold(input: &Path, q: &QArgs, out: &mut impl Write) -> Result<(), CliError> {
    let q = check_q(q.q, q.allow_any_q)?;
    let img = load_image(input)?;
    let sel = select_thresholds(&build_histogram(&img)?, q)?;
    let ts = sel.threshold_set();
    let text = format!(
        "t1={}\nt2={}\nt3={}\nq={}\nt1_criterion={}\nt2_criterion={}\nt3_criterion={}\n",
        ts.t1, ts.t2, ts.t3, q, sel.global.criterion, sel.low.criterion, sel.high.criterion
    );
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Output { path: "<stdout>".into(), source })
}

pub fn cmd_edges(input: &Path, output: &Path, q: &QArgs) -> Result<EdgeMap, CliError> {
    let q = check_q(q.q, q.allow_any_q)?;
    let img = load_image(input)?;
    let (edges, _) = detect_hybrid(&img, q)?;
    save_edges(output, &edges)?;
    Ok(edges)
}

pub fn run_baseline(img: &GrayImage, method: BaselineMethod, params: &BaselineArgs) -> Result<EdgeMap, Error> {
    match method {
        BaselineMethod::Sobel => sobel_edges(img, params.scale),
        BaselineMethod::Log => log_edges(img, params.sigma, params.zc_thresh),
    }
}

pub fn cmd_baseline(
    input: &Path,
    output: &Path,
    method: BaselineMethod,
    params: &BaselineArgs,
) -> Result<EdgeMap, CliError> {
    let img = load_image(input)?;
    let edges = run_baseline(&img, method, params)?;
    save_edges(output, &edges)?;
    Ok(edges)
}

/// Dispatches a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Threshold { input, q } => cmd_threshold(&input, &q, &mut stdout),
        Command::Edges { input, output, q } => cmd_edges(&input, &output, &q).map(drop),
        Command::Baseline { input, output, method, params } => {
            cmd_baseline(&input, &output, method, &params).map(drop)
        }
        Command::Bench { inputs, runs, csv, q, params, verbose } => {
            let opts = BenchOptions { runs, q: q.q, allow_any_q: q.allow_any_q, baseline: params, verbose };
            match cmd_bench(&inputs, &csv, &opts, &mut stdout) {
                Ok(rows) => match bench::exit_code(&rows) {
                    0 => Ok(()),
                    code => {
                        eprintln!("some benchmark rows failed; see {}", csv.display());
                        return code;
                    }
                },
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
