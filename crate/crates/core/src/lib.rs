//! Edge detection for 8-bit grayscale images by hybrid entropic thresholding.
//!
//! The pipeline picks a global threshold `t1` that maximizes the summed
//! Shannon entropy of the two classes it creates, then re-thresholds each
//! half of the histogram with a Tsallis criterion (`t2` below `t1`, `t3`
//! above it). One combined binarization marks `t2 <= f < t1` and `f >= t3`,
//! and a 3×3 homogeneity window flags every pixel whose neighborhood is
//! mixed.
//!
//! ```
//! use hybrid_edge::{detect_hybrid, GrayImage};
//!
//! let img = GrayImage::from_fn(64, 64, |_, col| [40, 90, 160, 220][col / 16]);
//! let (edges, ts) = detect_hybrid(&img, 0.5)?;
//! assert_eq!((ts.t1, ts.t2, ts.t3), (90, 40, 160));
//! assert!(edges.edge_count() > 0);
//! # Ok::<(), hybrid_edge::Error>(())
//! ```
//!
//! The `book/` directory at the repository root explains each stage; its
//! code listings are compiled and run as doc-tests of this crate.

pub mod baselines;
pub mod cli;
pub mod edgemap;
pub mod entropic;
pub mod error;
pub mod histogram;
pub mod imgio;

pub use edgemap::{
    binarize, binarize_hybrid, central_entropy, detect_edges, detect_hybrid, select_thresholds,
    BinaryImage, EdgeMap, HybridThresholds, ThresholdSet,
};
pub use entropic::{
    class_distributions, pseudo_additive_combine, shannon_entropy, shannon_threshold,
    tsallis_entropy, tsallis_sqrt_threshold, tsallis_threshold, ThresholdResult,
};
pub use error::{Error, Result};
pub use histogram::{build_histogram, SparseHistogram};
pub use imgio::{read_pgm, render_edges, write_pgm, GrayImage};

// Book chapters are doc-tested here so their listings cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/histograms.md")]
    mod histograms {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    mod thresholds {}
    #[doc = include_str!("../../../book/src/edge-detection.md")]
    mod edge_detection {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
