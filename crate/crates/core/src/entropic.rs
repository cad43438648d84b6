//! Entropy functionals and entropic threshold selection.
//!
//! A threshold at 1-based entry index `t` splits a [`SparseHistogram`] into
//! class A (entries `1..=t`) and class B (entries `t+1..=k`). Each class is
//! renormalized to a distribution of its own, and the threshold is the `t`
//! that maximizes a combination of the two class entropies:
//!
//! * Shannon: `S_A + S_B`
//! * Tsallis of index `q`: `S_A + S_B + (1 - q) S_A S_B`
//! * Tsallis at `q = 0.5`, which reduces to `a * b - 1` where `a` and `b` are
//!   the sums of square roots of the class probabilities.
//!
//! Only `t` in `1..k` is searched, so both classes are always non-empty. The
//! first maximizer wins; a later candidate must beat the incumbent by more
//! than floating-point noise to replace it.
//!
//! The search itself runs on prefix sums over integer counts, so each
//! criterion costs `O(k)`. [`class_distributions`] gives the direct
//! per-class view used for verification.

use crate::error::{Error, Result};
use crate::histogram::SparseHistogram;

/// Relative margin a candidate must clear to replace the incumbent maximizer.
const TIE_TOLERANCE: f64 = 1e-12;

/// Outcome of a threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    /// Gray level of the last entry in the lower class.
    pub level: u8,
    /// 1-based index into the searched histogram, in `1..k`.
    pub entry_index: usize,
    /// Value of the maximized objective at `entry_index`.
    pub criterion: f64,
}

/// Logarithm base for the Shannon objective. The argmax does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// The two class distributions induced by a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSplit {
    /// Probability mass of class A, `P_A`.
    pub mass_a: f64,
    /// `1 - P_A`.
    pub mass_b: f64,
    /// `p_i / P_A` for entries at or below the threshold.
    pub dist_a: Vec<f64>,
    /// `p_i / P_B` for entries above it.
    pub dist_b: Vec<f64>,
}

/// Slack allowed on normalization, both for the total and for single
/// probabilities that renormalization pushes an ulp above 1.
const NORMALIZATION_TOLERANCE: f64 = 1e-9;

fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if let Some((index, &value)) =
        probs.iter().enumerate().find(|&(_, &p)| !(p > 0.0 && p <= 1.0 + NORMALIZATION_TOLERANCE))
    {
        return Err(Error::InvalidProbability { index, value });
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    Ok(())
}

fn validate_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidIndex(q));
    }
    if q == 1.0 {
        return Err(Error::ShannonLimit);
    }
    Ok(())
}

/// Shannon entropy `-sum p ln p` in nats.
///
/// Zero probabilities are rejected rather than skipped; strip them first.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    validate_probs(probs)?;
    Ok(-probs.iter().map(|&p| p * p.ln()).sum::<f64>())
}

/// Tsallis entropy `(1 - sum p^q) / (q - 1)`.
pub fn tsallis_entropy(probs: &[f64], q: f64) -> Result<f64> {
    validate_q(q)?;
    validate_probs(probs)?;
    let sum_pow: f64 = probs.iter().map(|&p| p.powf(q)).sum();
    Ok((1.0 - sum_pow) / (q - 1.0))
}

/// Entropy of two independent subsystems: `sa + sb + (1 - q) sa sb`.
pub fn pseudo_additive_combine(sa: f64, sb: f64, q: f64) -> f64 {
    sa + sb + (1.0 - q) * sa * sb
}

/// Class masses and renormalized class distributions at the 1-based split
/// index `t_idx`.
pub fn class_distributions(hist: &SparseHistogram, t_idx: usize) -> Result<ClassSplit> {
    let k = hist.len();
    if t_idx == 0 || t_idx >= k {
        return Err(Error::SplitOutOfRange { index: t_idx, len: k });
    }
    let probs = hist.probs();
    let mass_a: f64 = probs[..t_idx].iter().sum();
    let mass_b = 1.0 - mass_a;
    Ok(ClassSplit {
        mass_a,
        mass_b,
        dist_a: probs[..t_idx].iter().map(|&p| p / mass_a).collect(),
        dist_b: probs[t_idx..].iter().map(|&p| p / mass_b).collect(),
    })
}

fn check_searchable(hist: &SparseHistogram) -> Result<()> {
    if hist.len() < 2 {
        Err(Error::SingleLevel)
    } else {
        Ok(())
    }
}

/// Runs `objective(count_a, sum_a, count_b, sum_b)` over every split, where
/// `sum_*` is the class total of `term(count)` over its entries, and keeps the
/// first maximizer.
fn search<T, O>(hist: &SparseHistogram, term: T, objective: O) -> ThresholdResult
where
    T: Fn(f64) -> f64,
    O: Fn(f64, f64, f64, f64) -> f64,
{
    let entries = hist.entries();
    let total_count = hist.total() as f64;
    let terms: Vec<f64> = entries.iter().map(|e| term(e.count as f64)).collect();
    let total_term: f64 = terms.iter().sum();

    let mut best: Option<ThresholdResult> = None;
    let mut count_a = 0u64;
    let mut sum_a = 0.0;
    for t in 1..entries.len() {
        count_a += entries[t - 1].count;
        sum_a += terms[t - 1];
        let count_b = total_count - count_a as f64;
        let sum_b = total_term - sum_a;
        let value = objective(count_a as f64, sum_a, count_b, sum_b);
        let replace = match best {
            None => true,
            Some(b) => {
                value - b.criterion
                    > TIE_TOLERANCE * b.criterion.abs().max(value.abs()).max(1.0)
            }
        };
        if replace {
            best = Some(ThresholdResult { level: entries[t - 1].level, entry_index: t, criterion: value });
        }
    }
    best.expect("histogram has at least two entries")
}

/// Shannon threshold: maximizes `S_A(t) + S_B(t)` in nats.
pub fn shannon_threshold(hist: &SparseHistogram) -> Result<ThresholdResult> {
    shannon_threshold_with_base(hist, LogBase::E)
}

/// Shannon threshold with an explicit log base, for cross-checking against
/// base-2 implementations. The selected entry does not depend on `base`.
pub fn shannon_threshold_with_base(hist: &SparseHistogram, base: LogBase) -> Result<ThresholdResult> {
    check_searchable(hist)?;
    // with class counts n and entry counts c: S = log n - (sum c log c) / n
    Ok(search(
        hist,
        |c| c * base.log(c),
        |na, sa, nb, sb| (base.log(na) - sa / na) + (base.log(nb) - sb / nb),
    ))
}

/// Tsallis threshold of index `q`: maximizes the pseudo-additive combination
/// of the two class entropies.
pub fn tsallis_threshold(hist: &SparseHistogram, q: f64) -> Result<ThresholdResult> {
    validate_q(q)?;
    check_searchable(hist)?;
    // sum (c/n)^q = n^-q * sum c^q
    Ok(search(
        hist,
        |c| c.powf(q),
        |na, sa, nb, sb| {
            let s_a = (1.0 - sa * na.powf(-q)) / (q - 1.0);
            let s_b = (1.0 - sb * nb.powf(-q)) / (q - 1.0);
            pseudo_additive_combine(s_a, s_b, q)
        },
    ))
}

/// Tsallis threshold at `q = 0.5` via the square-root criterion `a * b - 1`.
///
/// Selects the same entry as `tsallis_threshold(hist, 0.5)`; its criterion is
/// half of that function's.
pub fn tsallis_sqrt_threshold(hist: &SparseHistogram) -> Result<ThresholdResult> {
    check_searchable(hist)?;
    Ok(search(hist, f64::sqrt, |na, sa, nb, sb| (sa / na.sqrt()) * (sb / nb.sqrt()) - 1.0))
}
