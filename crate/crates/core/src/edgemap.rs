//! Binarization and the 3×3 window-homogeneity edge detector.
//!
//! After thresholding, every interior pixel is compared with the nine cells
//! of its 3×3 window (itself included). If at most six of them share its
//! binary value, the window is mixed and the pixel is an edge. In entropy
//! terms, the central probability `p_c = matches / 9` carries the entropy
//! `-p_c ln p_c` of [`central_entropy`], and the edge rule is `p_c <= 6/9`.
//! The detector uses the integer count directly.
//!
//! The hybrid pipeline ([`detect_hybrid`]) picks a global Shannon threshold
//! `t1`, then a Tsallis threshold in each half of the histogram (`t2` below,
//! `t3` above), and binarizes all three regions in a single pass before one
//! run of the detector.

use crate::entropic::{shannon_threshold, tsallis_sqrt_threshold, tsallis_threshold, ThresholdResult};
use crate::error::{Error, Part, Result};
use crate::histogram::{build_histogram, SparseHistogram};
use crate::imgio::GrayImage;

/// Default entropic index for the local thresholds.
pub const DEFAULT_Q: f64 = 0.5;

/// Largest number of matching window cells that still marks an edge.
pub const MAX_EDGE_MATCHES: u8 = 6;

/// A raster of 0/1 values, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

fn check_bits(width: usize, height: usize, bits: &[u8]) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage);
    }
    if width.checked_mul(height) != Some(bits.len()) {
        return Err(Error::DimensionMismatch { width, height, len: bits.len() });
    }
    if let Some(index) = bits.iter().position(|&b| b > 1) {
        return Err(Error::NotBinary { index, value: bits[index] });
    }
    Ok(())
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        check_bits(width, height, &bits)?;
        Ok(BinaryImage { width, height, bits })
    }

    /// # Panics
    ///
    /// If either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let bits = (0..height)
            .flat_map(|row| (0..width).map(move |col| (row, col)))
            .map(|(row, col)| u8::from(f(row, col)))
            .collect();
        BinaryImage { width, height, bits }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.width + col]
    }

    /// Every bit flipped.
    pub fn complement(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|&b| 1 - b).collect(),
        }
    }
}

/// Detected edges: 1 marks an edge pixel. The outermost rows and columns are
/// always 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    bits: Vec<u8>,
}

impl EdgeMap {
    /// Validates a 0/1 raster with an all-zero border.
    pub fn from_bits(width: usize, height: usize, bits: Vec<u8>) -> Result<Self> {
        check_bits(width, height, &bits)?;
        for (index, &b) in bits.iter().enumerate() {
            let (row, col) = (index / width, index % width);
            let border = row == 0 || col == 0 || row + 1 == height || col + 1 == width;
            if border && b != 0 {
                return Err(Error::NonZeroBorder { index });
            }
        }
        Ok(EdgeMap { width, height, bits })
    }

    /// Marks the interior pixels for which `is_edge(row, col)` holds.
    pub(crate) fn from_interior(
        width: usize,
        height: usize,
        mut is_edge: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let mut bits = vec![0u8; width * height];
        for row in 1..height.saturating_sub(1) {
            for col in 1..width.saturating_sub(1) {
                bits[row * width + col] = u8::from(is_edge(row, col));
            }
        }
        EdgeMap { width, height, bits }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.width + col]
    }

    /// Number of edge pixels.
    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Pixel-wise OR of two maps of equal shape.
    ///
    /// # Panics
    ///
    /// If the shapes differ.
    pub fn union(&self, other: &EdgeMap) -> EdgeMap {
        assert_eq!((self.width, self.height), (other.width, other.height), "edge map shapes differ");
        EdgeMap {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect(),
        }
    }
}

/// The three gray-level thresholds of the hybrid method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    /// Global Shannon threshold.
    pub t1: u8,
    /// Local threshold of the part at or below `t1`.
    pub t2: u8,
    /// Local threshold of the part above `t1`.
    pub t3: u8,
    /// Entropic index used for `t2` and `t3`.
    pub q: f64,
}

impl ThresholdSet {
    /// Checks `t2 <= t1 < t3`.
    pub fn new(t1: u8, t2: u8, t3: u8, q: f64) -> Result<Self> {
        if !(t2 <= t1 && t1 < t3) {
            return Err(Error::ThresholdOrder { t1, t2, t3 });
        }
        Ok(ThresholdSet { t1, t2, t3, q })
    }
}

/// Full outcome of threshold selection, with the criterion behind each level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridThresholds {
    /// Over the full histogram.
    pub global: ThresholdResult,
    /// Over entries `1..=global.entry_index`.
    pub low: ThresholdResult,
    /// Over entries after `global.entry_index`; `entry_index` is relative to
    /// that part.
    pub high: ThresholdResult,
    pub q: f64,
}

impl HybridThresholds {
    pub fn threshold_set(&self) -> ThresholdSet {
        ThresholdSet { t1: self.global.level, t2: self.low.level, t3: self.high.level, q: self.q }
    }
}

/// `0` where `pixel <= t`, `1` elsewhere.
pub fn binarize(img: &GrayImage, t: u8) -> BinaryImage {
    BinaryImage {
        width: img.width(),
        height: img.height(),
        bits: img.pixels().iter().map(|&p| u8::from(p > t)).collect(),
    }
}

/// Combined three-threshold binarization: `1` iff `t2 <= pixel < t1` or
/// `pixel >= t3`. Pixels equal to `t1` map to `0`.
pub fn binarize_hybrid(img: &GrayImage, ts: &ThresholdSet) -> Result<BinaryImage> {
    let ThresholdSet { t1, t2, t3, .. } = *ts;
    ThresholdSet::new(t1, t2, t3, ts.q)?;
    Ok(BinaryImage {
        width: img.width(),
        height: img.height(),
        bits: img
            .pixels()
            .iter()
            .map(|&p| u8::from((p >= t2 && p < t1) || p >= t3))
            .collect(),
    })
}

/// `-p_c ln p_c` for a central-pixel probability `p_c` in `(0, 1]`.
pub fn central_entropy(p_c: f64) -> Result<f64> {
    if !(p_c > 0.0 && p_c <= 1.0) {
        return Err(Error::InvalidCentralProbability(p_c));
    }
    Ok(-p_c * p_c.ln())
}

/// Marks interior pixels whose 3×3 window has at most six cells (center
/// included) equal to the center. Border pixels are left at 0.
pub fn detect_edges(bin: &BinaryImage) -> Result<EdgeMap> {
    let (w, h) = (bin.width, bin.height);
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall { width: w, height: h, min_width: 3, min_height: 3 });
    }
    let mut out = vec![0u8; w * h];
    let mut column_ones = vec![0u8; w];
    for row in 1..h - 1 {
        let above = &bin.bits[(row - 1) * w..row * w];
        let center = &bin.bits[row * w..(row + 1) * w];
        let below = &bin.bits[(row + 1) * w..(row + 2) * w];
        for (((sum, a), c), b) in column_ones.iter_mut().zip(above).zip(center).zip(below) {
            *sum = a + c + b;
        }
        let out_row = &mut out[row * w..(row + 1) * w];
        for col in 1..w - 1 {
            let ones = column_ones[col - 1] + column_ones[col] + column_ones[col + 1];
            // cells equal to the center: the ones if it is set, the zeros otherwise
            let matches = if center[col] == 1 { ones } else { 9 - ones };
            out_row[col] = u8::from(matches <= MAX_EDGE_MATCHES);
        }
    }
    Ok(EdgeMap { width: w, height: h, bits: out })
}

fn local_threshold(part: &SparseHistogram, which: Part, q: f64) -> Result<ThresholdResult> {
    if part.len() < 2 {
        return Err(Error::DegeneratePart { part: which, levels: part.len() });
    }
    if q == 0.5 {
        tsallis_sqrt_threshold(part)
    } else {
        tsallis_threshold(part, q)
    }
}

/// Selects `t1` (Shannon, full histogram) and the local thresholds `t2`, `t3`
/// (Tsallis of index `q`, one per part).
pub fn select_thresholds(hist: &SparseHistogram, q: f64) -> Result<HybridThresholds> {
    let global = shannon_threshold(hist)?;
    let (low_part, high_part) = hist.split_at(global.entry_index)?;
    let low = local_threshold(&low_part, Part::Low, q)?;
    let high = local_threshold(&high_part, Part::High, q)?;
    Ok(HybridThresholds { global, low, high, q })
}

/// The hybrid edge detector: threshold selection, combined binarization, and
/// one pass of [`detect_edges`].
pub fn detect_hybrid(img: &GrayImage, q: f64) -> Result<(EdgeMap, ThresholdSet)> {
    if img.width() < 3 || img.height() < 3 {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min_width: 3,
            min_height: 3,
        });
    }
    let hist = build_histogram(img)?;
    let ts = select_thresholds(&hist, q)?.threshold_set();
    let bin = binarize_hybrid(img, &ts)?;
    Ok((detect_edges(&bin)?, ts))
}
