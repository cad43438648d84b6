//! Sparse gray-level histograms.
//!
//! Only levels that actually occur are kept, so a threshold search runs over
//! the `k` distinct levels of an image rather than all 256. Entry indices in
//! this module are 1-based, matching the way thresholds are reported: entry
//! index `t` means "the first `t` entries form the lower class".

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// One occupied gray level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistEntry {
    pub level: u8,
    pub count: u64,
    /// `count / total` of the owning histogram.
    pub prob: f64,
}

/// Occupied gray levels in ascending order with their counts and probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHistogram {
    entries: Vec<HistEntry>,
    total: u64,
}

impl SparseHistogram {
    /// Builds a histogram from `(level, count)` pairs.
    ///
    /// Levels must be strictly ascending and every count positive.
    pub fn from_counts<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u8, u64)>,
    {
        let pairs: Vec<(u8, u64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::EmptyImage);
        }
        if pairs.iter().any(|&(_, c)| c == 0) || pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::MalformedHistogram);
        }
        let total: u64 = pairs.iter().map(|&(_, c)| c).sum();
        let entries = pairs
            .into_iter()
            .map(|(level, count)| HistEntry { level, count, prob: count as f64 / total as f64 })
            .collect();
        Ok(SparseHistogram { entries, total })
    }

    /// Builds a histogram from a dense 256-bin count table, dropping empty bins.
    pub fn from_dense(counts: &[u64; 256]) -> Result<Self> {
        Self::from_counts(
            counts
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(level, &c)| (level as u8, c)),
        )
    }

    pub fn entries(&self) -> &[HistEntry] {
        &self.entries
    }

    /// Number of distinct levels, `k`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn probs(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.prob).collect()
    }

    /// Gray level of the 1-based entry `index`.
    pub fn level(&self, index: usize) -> u8 {
        self.entries[index - 1].level
    }

    /// Splits after the 1-based entry `index`: entries `1..=index` and
    /// `index+1..=k`, each renormalized over its own pixel total.
    pub fn split_at(&self, index: usize) -> Result<(SparseHistogram, SparseHistogram)> {
        if index == 0 || index >= self.entries.len() {
            return Err(Error::SplitOutOfRange { index, len: self.entries.len() });
        }
        let (low, high) = self.entries.split_at(index);
        let rebuild = |part: &[HistEntry]| {
            Self::from_counts(part.iter().map(|e| (e.level, e.count)))
                .expect("sub-range of a valid histogram is valid")
        };
        Ok((rebuild(low), rebuild(high)))
    }
}

/// Counts the gray levels of `img`, keeping only those that occur.
pub fn build_histogram(img: &GrayImage) -> Result<SparseHistogram> {
    if img.pixels().is_empty() {
        return Err(Error::EmptyImage);
    }
    let mut counts = [0u64; 256];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    SparseHistogram::from_dense(&counts)
}
