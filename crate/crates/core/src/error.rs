use thiserror::Error;

use crate::imgio::PgmError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which side of the global threshold a sub-histogram came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// Levels at or below the global threshold.
    Low,
    /// Levels above the global threshold.
    High,
}

impl std::fmt::Display for Part {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Part::Low => f.write_str("low part"),
            Part::High => f.write_str("high part"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error("image has no pixels")]
    EmptyImage,

    #[error("image dimensions {width}x{height} do not match {len} pixels")]
    DimensionMismatch { width: usize, height: usize, len: usize },

    #[error("raster value {value} at index {index} is not 0 or 1")]
    NotBinary { index: usize, value: u8 },

    #[error("edge map has a nonzero border pixel at index {index}")]
    NonZeroBorder { index: usize },

    #[error("histogram entries must have strictly ascending levels and positive counts")]
    MalformedHistogram,

    #[error("split index {index} out of range for a histogram with {len} entries")]
    SplitOutOfRange { index: usize, len: usize },

    #[error("no threshold separates a histogram with only one level")]
    SingleLevel,

    #[error("{part} has {levels} distinct level(s); at least 2 are needed for a local threshold")]
    DegeneratePart { part: Part, levels: usize },

    #[error("probability {value} at position {index} is not in (0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("empty probability distribution")]
    EmptyDistribution,

    #[error("entropic index q = 1 is the Shannon limit; use the Shannon variant instead")]
    ShannonLimit,

    #[error("entropic index q must be positive, got {0}")]
    InvalidIndex(f64),

    #[error("thresholds violate t2 <= t1 < t3 (t1={t1}, t2={t2}, t3={t3})")]
    ThresholdOrder { t1: u8, t2: u8, t3: u8 },

    #[error("central probability {0} is not in (0, 1]")]
    InvalidCentralProbability(f64),

    #[error("image is {width}x{height}; need at least {min_width}x{min_height}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("kernel size {0} must be odd and positive with size*size weights")]
    InvalidKernel(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
