//! Runtime benchmark: each method is run once to warm up, then `runs` more
//! times under a wall-clock timer that covers the computation only (image
//! decoding and file output are outside the boundary).

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::{check_q, load_image, run_baseline, BaselineArgs, BaselineMethod, CliError};
use crate::edgemap::{binarize_hybrid, detect_edges, select_thresholds, EdgeMap};
use crate::error::Error;
use crate::histogram::build_histogram;
use crate::imgio::GrayImage;

pub const CSV_BOUNDARY_LINE: &str = "# boundary=compute-only";
pub const CSV_HEADER: &str =
    "method,image_id,width,height,runs,mean_seconds,histogram_s,thresholds_s,binarize_s,detect_s,status";

/// Shortest duration recorded for a run, so that means stay positive.
const MIN_SECONDS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Hybrid,
    Sobel,
    Log,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Hybrid, Method::Sobel, Method::Log];

    pub fn name(self) -> &'static str {
        match self {
            Method::Hybrid => "hybrid",
            Method::Sobel => "sobel",
            Method::Log => "log",
        }
    }
}

/// Mean seconds spent in each stage of the hybrid pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseTimes {
    pub histogram: f64,
    pub thresholds: f64,
    pub binarize: f64,
    pub detect: f64,
}

impl PhaseTimes {
    pub fn sum(&self) -> f64 {
        self.histogram + self.thresholds + self.binarize + self.detect
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRecord {
    pub method: Method,
    pub image_id: String,
    pub width: usize,
    pub height: usize,
    pub runs: usize,
    pub mean_seconds: f64,
    /// Only for the hybrid method.
    pub per_phase: Option<PhaseTimes>,
    /// Individual run times, in seconds.
    pub run_seconds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BenchRow {
    Ok(TimingRecord),
    Failed {
        method: Method,
        image_id: String,
        width: usize,
        height: usize,
        kind: &'static str,
        exit_code: u8,
    },
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        match self {
            BenchRow::Ok(r) => {
                let phases = match r.per_phase {
                    Some(p) => format!("{:.9},{:.9},{:.9},{:.9}", p.histogram, p.thresholds, p.binarize, p.detect),
                    None => ",,,".to_string(),
                };
                format!(
                    "{},{},{},{},{},{:.9},{},ok",
                    r.method.name(),
                    r.image_id,
                    r.width,
                    r.height,
                    r.runs,
                    r.mean_seconds,
                    phases
                )
            }
            BenchRow::Failed { method, image_id, width, height, kind, .. } => {
                format!("{},{image_id},{width},{height},0,,,,,,{kind}", method.name())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub runs: usize,
    pub q: f64,
    pub allow_any_q: bool,
    pub baseline: BaselineArgs,
    pub verbose: bool,
}

/// `[a-z0-9_]+` identifier from the file stem, suffixed with the input
/// position so repeated paths stay distinct.
pub fn image_id(path: &Path, position: usize) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut id: String = stem
        .chars()
        .map(|c| {
            let c = c.to_ascii_lowercase();
            if c.is_ascii_lowercase() || c.is_ascii_digit() {
                c
            } else {
                '_'
            }
        })
        .collect();
    if id.is_empty() {
        id.push_str("image");
    }
    write!(id, "_{position}").unwrap();
    id
}

fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

/// One timed pass of the hybrid pipeline with per-stage timestamps.
fn hybrid_timed(img: &GrayImage, q: f64) -> Result<(EdgeMap, f64, PhaseTimes), Error> {
    let t0 = Instant::now();
    let hist = build_histogram(img)?;
    let t1 = Instant::now();
    let ts = select_thresholds(&hist, q)?.threshold_set();
    let t2 = Instant::now();
    let bin = binarize_hybrid(img, &ts)?;
    let t3 = Instant::now();
    let edges = detect_edges(&bin)?;
    let t4 = Instant::now();
    let phases = PhaseTimes {
        histogram: (t1 - t0).as_secs_f64(),
        thresholds: (t2 - t1).as_secs_f64(),
        binarize: (t3 - t2).as_secs_f64(),
        detect: (t4 - t3).as_secs_f64(),
    };
    Ok((edges, (t4 - t0).as_secs_f64(), phases))
}

/// Times one call of `method`; the phase breakdown is only produced for the
/// hybrid pipeline.
fn run_once(img: &GrayImage, method: Method, opts: &BenchOptions) -> Result<(f64, Option<PhaseTimes>), Error> {
    match method {
        Method::Hybrid => {
            let (edges, total, phases) = hybrid_timed(img, opts.q)?;
            std::hint::black_box(edges);
            Ok((total, Some(phases)))
        }
        Method::Sobel | Method::Log => {
            let which = if method == Method::Sobel { BaselineMethod::Sobel } else { BaselineMethod::Log };
            let start = Instant::now();
            let edges = run_baseline(img, which, &opts.baseline)?;
            let elapsed = seconds_since(start);
            std::hint::black_box(edges);
            Ok((elapsed, None))
        }
    }
}

/// Accumulated measurements for one image and method.
struct Slot<'a> {
    img: &'a GrayImage,
    image_id: &'a str,
    method: Method,
    times: Vec<f64>,
    phases: Option<PhaseTimes>,
    error: Option<CliError>,
}

impl Slot<'_> {
    fn record(&mut self, outcome: Result<(f64, Option<PhaseTimes>), Error>, timed: bool) {
        match outcome {
            Ok((t, phases)) if timed => {
                self.times.push(t.max(MIN_SECONDS));
                if let Some(p) = phases {
                    let acc = self.phases.get_or_insert_with(PhaseTimes::default);
                    acc.histogram += p.histogram;
                    acc.thresholds += p.thresholds;
                    acc.binarize += p.binarize;
                    acc.detect += p.detect;
                }
            }
            Ok(_) => {}
            Err(e) => self.error = Some(CliError::from(e)),
        }
    }

    fn into_row(self) -> BenchRow {
        let (width, height) = (self.img.width(), self.img.height());
        if let Some(err) = self.error {
            return BenchRow::Failed {
                method: self.method,
                image_id: self.image_id.to_string(),
                width,
                height,
                kind: err.kind(),
                exit_code: err.exit_code(),
            };
        }
        let n = self.times.len() as f64;
        BenchRow::Ok(TimingRecord {
            method: self.method,
            image_id: self.image_id.to_string(),
            width,
            height,
            runs: self.times.len(),
            mean_seconds: self.times.iter().sum::<f64>() / n,
            per_phase: self.phases.map(|p| PhaseTimes {
                histogram: p.histogram / n,
                thresholds: p.thresholds / n,
                binarize: p.binarize / n,
                detect: p.detect / n,
            }),
            run_seconds: self.times,
        })
    }
}

/// Benchmarks decoded images with every method.
///
/// Methods are measured one after another. Within a method, each image gets
/// one untimed warm-up call, then `opts.runs` timed calls issued round-robin
/// over the images so that slow drift in machine speed affects every image
/// alike.
pub fn bench_images(images: &[(String, GrayImage)], opts: &BenchOptions) -> Vec<BenchRow> {
    let mut slots: Vec<Slot> = images
        .iter()
        .flat_map(|(id, img)| {
            Method::ALL.iter().map(move |&method| Slot {
                img,
                image_id: id,
                method,
                times: Vec::with_capacity(opts.runs),
                phases: None,
                error: None,
            })
        })
        .collect();
    for method in Method::ALL {
        for slot in slots.iter_mut().filter(|s| s.method == method) {
            let outcome = run_once(slot.img, method, opts);
            slot.record(outcome, false);
        }
        for _ in 0..opts.runs {
            for slot in slots.iter_mut().filter(|s| s.method == method && s.error.is_none()) {
                let outcome = run_once(slot.img, method, opts);
                slot.record(outcome, true);
            }
        }
    }
    slots.into_iter().map(Slot::into_row).collect()
}

fn table(rows: &[BenchRow], verbose: bool) -> String {
    let mut out = format!("{:<8} {:<24} {:>11} {:>5} {:>14}\n", "method", "image", "size", "runs", "mean_ms");
    for row in rows {
        match row {
            BenchRow::Ok(r) => {
                let size = format!("{}x{}", r.width, r.height);
                writeln!(
                    out,
                    "{:<8} {:<24} {:>11} {:>5} {:>14.3}",
                    r.method.name(),
                    r.image_id,
                    size,
                    r.runs,
                    r.mean_seconds * 1e3
                )
                .unwrap();
                if verbose {
                    let runs: Vec<String> = r.run_seconds.iter().map(|s| format!("{:.3}", s * 1e3)).collect();
                    writeln!(out, "    runs_ms: {}", runs.join(" ")).unwrap();
                }
            }
            BenchRow::Failed { method, image_id, kind, .. } => {
                writeln!(out, "{:<8} {:<24} {kind}", method.name(), image_id).unwrap();
            }
        }
    }
    out
}

/// Benchmarks every input, writes the CSV to `csv_path` and a table to
/// `out`. Per-image failures become error rows rather than aborting the run.
pub fn cmd_bench(
    inputs: &[PathBuf],
    csv_path: &Path,
    opts: &BenchOptions,
    out: &mut impl Write,
) -> Result<Vec<BenchRow>, CliError> {
    if opts.runs == 0 {
        return Err(CliError::Usage("--runs must be at least 1".into()));
    }
    if inputs.is_empty() {
        return Err(CliError::Usage("at least one input image is required".into()));
    }
    check_q(opts.q, opts.allow_any_q)?;

    let mut images = Vec::new();
    let mut failures = Vec::new();
    for (position, path) in inputs.iter().enumerate() {
        let id = image_id(path, position);
        match load_image(path) {
            Ok(img) => images.push((id, img)),
            Err(e) => failures.push((position, id, e)),
        }
    }
    let mut measured = bench_images(&images, opts).into_iter();

    // rows follow input order, three per image
    let mut rows = Vec::with_capacity(inputs.len() * Method::ALL.len());
    let mut failures = failures.into_iter().peekable();
    for position in 0..inputs.len() {
        match failures.next_if(|(p, _, _)| *p == position) {
            Some((_, id, e)) => rows.extend(Method::ALL.iter().map(|&method| BenchRow::Failed {
                method,
                image_id: id.clone(),
                width: 0,
                height: 0,
                kind: e.kind(),
                exit_code: e.exit_code(),
            })),
            None => rows.extend(measured.by_ref().take(Method::ALL.len())),
        }
    }

    let mut csv = format!("{CSV_BOUNDARY_LINE}\n{CSV_HEADER}\n");
    for row in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    std::fs::write(csv_path, csv).map_err(|source| CliError::Output { path: csv_path.into(), source })?;
    out.write_all(table(&rows, opts.verbose).as_bytes())
        .map_err(|source| CliError::Output { path: "<stdout>".into(), source })?;
    Ok(rows)
}

/// Exit code for a finished benchmark: 0 when every row succeeded, otherwise
/// the code of the first failure.
pub fn exit_code(rows: &[BenchRow]) -> u8 {
    rows.iter()
        .find_map(|r| match r {
            BenchRow::Failed { exit_code, .. } => Some(*exit_code),
            BenchRow::Ok(_) => None,
        })
        .unwrap_or(0)
}
