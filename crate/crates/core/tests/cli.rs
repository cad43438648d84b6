use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hybrid_edge::{read_pgm, write_pgm, GrayImage};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybrid-edge")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn save(dir: &TempDir, name: &str, img: &GrayImage) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, write_pgm(img)).unwrap();
    path
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn bands() -> GrayImage {
    GrayImage::from_fn(64, 64, |_, col| [40, 90, 160, 220][col / 16])
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn threshold_prints_key_values() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "bands.pgm", &bands());
    let out = run(&["threshold", s(&input)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for line in ["t1=90", "t2=40", "t3=160", "q=0.5"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in {text}");
    }
}

#[test]
fn edges_output_matches_input_size_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "bands.pgm", &bands());
    let (a, b) = (dir.path().join("a.pgm"), dir.path().join("b.pgm"));
    assert_eq!(code(&run(&["edges", s(&input), s(&a)])), 0);
    assert_eq!(code(&run(&["edges", s(&input), s(&b)])), 0);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let img = read_pgm(&bytes).unwrap();
    assert_eq!((img.width(), img.height()), (64, 64));
    assert_eq!(img.get(32, 16), 255);
    assert_eq!(img.get(32, 8), 0);
}

#[test]
fn plain_pgm_input_is_accepted() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("plain.pgm");
    let body: Vec<String> = bands().pixels().iter().map(u8::to_string).collect();
    std::fs::write(&input, format!("P2\n# four bands\n64 64\n255\n{}\n", body.join(" "))).unwrap();
    let out = run(&["threshold", s(&input)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("t1=90"));
}

#[test]
fn constant_image_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "flat.pgm", &GrayImage::filled(8, 8, 77));
    assert_eq!(code(&run(&["edges", s(&input), s(&dir.path().join("o.pgm"))])), 4);
    assert_eq!(code(&run(&["threshold", s(&input)])), 4);
}

#[test]
fn missing_input_is_io_error() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nope.pgm");
    assert_eq!(code(&run(&["threshold", s(&missing)])), 2);
}

#[test]
fn malformed_pgm_is_parse_error() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.pgm");
    std::fs::write(&input, b"P6\n2 2\n255\n").unwrap();
    assert_eq!(code(&run(&["threshold", s(&input)])), 3);
    std::fs::write(&input, b"P5\n4 4\n255\n\x01\x02").unwrap();
    assert_eq!(code(&run(&["threshold", s(&input)])), 3);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "bands.pgm", &bands());
    let out = dir.path().join("o.pgm");
    assert_eq!(code(&run(&["baseline", s(&input), s(&out), "--method", "canny"])), 1);
    assert_eq!(code(&run(&["edges", s(&input), s(&out), "--q", "1.5"])), 1);
    assert_eq!(code(&run(&["edges", s(&input), s(&out), "--q", "1"])), 1);
    assert_eq!(code(&run(&["edges", s(&input), s(&out), "--q", "1.5", "--allow-any-q"])), 0);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&[])), 1);
}

#[test]
fn unwritable_output_is_output_error() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "bands.pgm", &bands());
    let out = dir.path().join("no_such_dir").join("o.pgm");
    assert_eq!(code(&run(&["edges", s(&input), s(&out)])), 5);
}

#[test]
fn sobel_on_constant_image_is_black() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "flat.pgm", &GrayImage::filled(20, 20, 128));
    let out = dir.path().join("o.pgm");
    assert_eq!(code(&run(&["baseline", s(&input), s(&out), "--method", "sobel"])), 0);
    let img = read_pgm(&std::fs::read(&out).unwrap()).unwrap();
    assert!(img.pixels().iter().all(|&p| p == 0));
}

#[test]
fn log_on_step_marks_the_step() {
    let dir = TempDir::new().unwrap();
    let step = GrayImage::from_fn(40, 30, |_, col| if col < 20 { 30 } else { 200 });
    let input = save(&dir, "step.pgm", &step);
    let out = dir.path().join("o.pgm");
    assert_eq!(code(&run(&["baseline", s(&input), s(&out), "--method", "log", "--sigma", "2"])), 0);
    let img = read_pgm(&std::fs::read(&out).unwrap()).unwrap();
    for row in 1..29 {
        let cols: Vec<usize> = (0..40).filter(|&c| img.get(row, c) == 255).collect();
        assert!(!cols.is_empty() && cols.iter().all(|&c| c == 19 || c == 20), "row {row}: {cols:?}");
    }
}

#[test]
fn bench_writes_three_rows_per_input() {
    let dir = TempDir::new().unwrap();
    let input = save(&dir, "Bands Image.pgm", &bands());
    let csv = dir.path().join("bench.csv");
    let out = run(&["bench", s(&input), s(&input), "--runs", "2", "--csv", s(&csv)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# boundary=compute-only");
    assert!(lines[1].starts_with("method,image_id,width,height,runs,mean_seconds"));
    let rows: Vec<Vec<&str>> = lines[2..].iter().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    let ids: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(ids, ["bands_image_0"; 3].into_iter().chain(["bands_image_1"; 3]).collect::<Vec<_>>());
    let methods: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(methods, ["hybrid", "sobel", "log", "hybrid", "sobel", "log"]);
    for row in &rows {
        assert_eq!(row.last(), Some(&"ok"));
        assert_eq!(row[4], "2");
        assert!(row[5].parse::<f64>().unwrap() > 0.0);
        assert_eq!(row[6].is_empty(), row[0] != "hybrid");
    }
}

#[test]
fn bench_reports_failed_inputs_and_continues() {
    let dir = TempDir::new().unwrap();
    let good = save(&dir, "good.pgm", &bands());
    let missing = dir.path().join("missing.pgm");
    let csv = dir.path().join("bench.csv");
    let out = run(&["bench", s(&good), s(&missing), "--runs", "1", "--csv", s(&csv)]);
    assert_eq!(code(&out), 2);
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[..3].iter().all(|r| r.ends_with(",ok")));
    assert_eq!(rows[3], "hybrid,missing_1,0,0,0,,,,,,io_error");
}
