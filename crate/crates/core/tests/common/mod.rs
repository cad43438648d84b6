//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls into the threshold or detector code under test; the
//! oracles work from raw pixel counts with direct nested-loop evaluation.

#![allow(dead_code)]

use hybrid_edge::{BinaryImage, GrayImage, SparseHistogram};
use rand::seq::SliceRandom;
use rand::Rng;

/// Dense counts of every gray level.
pub fn dense_counts(pixels: &[u8]) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &p in pixels {
        counts[p as usize] += 1;
    }
    counts
}

/// `(level, count)` pairs of the occupied levels.
pub fn occupied(counts: &[u64; 256]) -> Vec<(u8, u64)> {
    (0..256).filter(|&l| counts[l] > 0).map(|l| (l as u8, counts[l])).collect()
}

fn class_probs(counts: &[u64]) -> Vec<f64> {
    let n: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

pub fn shannon_nats(p: &[f64]) -> f64 {
    p.iter().map(|&x| -x * x.ln()).sum()
}

pub fn shannon_bits(p: &[f64]) -> f64 {
    p.iter().map(|&x| -x * x.log2()).sum()
}

pub fn tsallis(p: &[f64], q: f64) -> f64 {
    (1.0 - p.iter().map(|&x| x.powf(q)).sum::<f64>()) / (q - 1.0)
}

/// Objective values at every split `t = 1..k-1` (index 0 holds `t = 1`),
/// evaluated from per-class renormalized distributions.
pub fn objectives(counts: &[u64], f: impl Fn(&[f64], &[f64]) -> f64) -> Vec<f64> {
    (1..counts.len())
        .map(|t| f(&class_probs(&counts[..t]), &class_probs(&counts[t..])))
        .collect()
}

pub fn shannon_objectives(counts: &[u64]) -> Vec<f64> {
    objectives(counts, |a, b| shannon_nats(a) + shannon_nats(b))
}

pub fn tsallis_objectives(counts: &[u64], q: f64) -> Vec<f64> {
    objectives(counts, |a, b| {
        let (sa, sb) = (tsallis(a, q), tsallis(b, q));
        sa + sb + (1.0 - q) * sa * sb
    })
}

/// 1-based index of the first maximum.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best + 1
}

/// Gap between the largest and second-largest value.
pub fn top_gap(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sorted.len() < 2 {
        f64::INFINITY
    } else {
        sorted[0] - sorted[1]
    }
}

/// Random sparse histogram with `k` distinct levels in `k_range` and counts in
/// `1..=max_count`.
pub fn random_histogram(
    rng: &mut impl Rng,
    k_range: std::ops::RangeInclusive<usize>,
    max_count: u64,
) -> SparseHistogram {
    let k = rng.gen_range(k_range);
    let mut levels: Vec<u8> = (0..=255).collect();
    levels.shuffle(rng);
    let mut levels = levels[..k].to_vec();
    levels.sort_unstable();
    SparseHistogram::from_counts(levels.into_iter().map(|l| (l, rng.gen_range(1..=max_count)))).unwrap()
}

pub fn counts_of(hist: &SparseHistogram) -> Vec<u64> {
    hist.entries().iter().map(|e| e.count).collect()
}

/// Window-homogeneity detector by direct comparison of the nine cells.
pub fn edge_oracle(bits: &[u8], width: usize, height: usize) -> Vec<u8> {
    let at = |r: usize, c: usize| bits[r * width + c];
    let mut out = vec![0u8; width * height];
    for x in 1..height.saturating_sub(1) {
        for y in 1..width.saturating_sub(1) {
            let mut sum = 0;
            for j in 0..3 {
                for k in 0..3 {
                    if at(x, y) == at(x + j - 1, y + k - 1) {
                        sum += 1;
                    }
                }
            }
            if sum <= 6 {
                out[x * width + y] = 1;
            }
        }
    }
    out
}

/// Thresholds computed the long way: t1 by Shannon over the whole image,
/// then each part's pixels collected and counted on their own, with t2 and
/// t3 from the generic Tsallis criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiteralThresholds {
    pub t1: u8,
    pub t2: u8,
    pub t3: u8,
}

/// Returns `None` when a part has fewer than two levels or any of the three
/// searches has a maximizer within `min_gap` of the runner-up.
pub fn literal_thresholds(pixels: &[u8], q: f64, min_gap: f64) -> Option<LiteralThresholds> {
    let all = occupied(&dense_counts(pixels));
    if all.len() < 2 {
        return None;
    }
    let counts: Vec<u64> = all.iter().map(|&(_, c)| c).collect();
    let obj = shannon_objectives(&counts);
    if top_gap(&obj) < min_gap {
        return None;
    }
    let t1 = all[argmax(&obj) - 1].0;

    let part = |keep: &dyn Fn(u8) -> bool| -> Option<u8> {
        let sub: Vec<u8> = pixels.iter().copied().filter(|&p| keep(p)).collect();
        let levels = occupied(&dense_counts(&sub));
        if levels.len() < 2 {
            return None;
        }
        let counts: Vec<u64> = levels.iter().map(|&(_, c)| c).collect();
        let obj = tsallis_objectives(&counts, q);
        if top_gap(&obj) < min_gap {
            return None;
        }
        Some(levels[argmax(&obj) - 1].0)
    };
    let t2 = part(&|p| p <= t1)?;
    let t3 = part(&|p| p > t1)?;
    Some(LiteralThresholds { t1, t2, t3 })
}

/// The unmerged pipeline: each part is binarized on its own (pixels outside
/// the part are 0), run through the detector separately, and the two edge
/// images are OR-ed together.
pub fn literal_edges(img: &GrayImage, th: LiteralThresholds) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    let part1: Vec<u8> =
        img.pixels().iter().map(|&p| u8::from(p <= th.t1 && p >= th.t2 && p != th.t1)).collect();
    let part2: Vec<u8> = img.pixels().iter().map(|&p| u8::from(p > th.t1 && p >= th.t3)).collect();
    let e1 = edge_oracle(&part1, w, h);
    let e2 = edge_oracle(&part2, w, h);
    e1.iter().zip(&e2).map(|(a, b)| a | b).collect()
}

/// Three-region synthetic image whose per-part foregrounds never share a
/// 3×3 window.
///
/// Gray levels are drawn from three disjoint bands. Once the thresholds are
/// known (they depend only on the level multiset), the pixels are laid out
/// column-major: the low part shuffled into the left region, a two-column
/// moat of pixels that binarize to 0 under both part rules, then the high
/// part shuffled into the right region.
pub fn three_region_image(rng: &mut impl Rng, q: f64) -> Option<(GrayImage, LiteralThresholds)> {
    let width = rng.gen_range(16..=40);
    let height = rng.gen_range(8..=24);
    let n = width * height;
    let bands = [(0u8, 70u8), (90, 160), (180, 255)];
    let shares: Vec<f64> = (0..3).map(|_| rng.gen_range(0.2..1.0)).collect();
    let share_total: f64 = shares.iter().sum();
    let mut pixels = Vec::with_capacity(n);
    for (i, &(lo, hi)) in bands.iter().enumerate() {
        let want = if i == 2 { n - pixels.len() } else { (n as f64 * shares[i] / share_total) as usize };
        let levels: Vec<u8> = (0..rng.gen_range(2..=6)).map(|_| rng.gen_range(lo..=hi)).collect();
        pixels.extend((0..want).map(|_| levels[rng.gen_range(0..levels.len())]));
    }
    let th = literal_thresholds(&pixels, q, 1e-9)?;

    let is_zero = |p: u8| p < th.t2 || (p >= th.t1 && p < th.t3);
    let (mut low, mut high): (Vec<u8>, Vec<u8>) = pixels.iter().partition(|&&p| p <= th.t1);
    low.shuffle(rng);
    high.shuffle(rng);

    // moat: finish the low part's last column, then two full columns
    let moat_len = (height - low.len() % height) % height + 2 * height;
    let mut moat = Vec::with_capacity(moat_len);
    for part in [&mut low, &mut high] {
        let mut i = 0;
        while i < part.len() && moat.len() < moat_len {
            if is_zero(part[i]) {
                moat.push(part.swap_remove(i));
            } else {
                i += 1;
            }
        }
    }
    if moat.len() < moat_len {
        return None;
    }
    // recompute the left padding now that `low` has shrunk
    let pad = (height - low.len() % height) % height;
    if pad + 2 * height > moat.len() {
        return None;
    }
    let extra = moat.split_off(pad + 2 * height);
    high.extend(extra);
    high.shuffle(rng);

    let column_major: Vec<u8> = low.into_iter().chain(moat).chain(high).collect();
    let img = GrayImage::from_fn(width, height, |r, c| column_major[c * height + r]);
    Some((img, th))
}

/// Uniform noise image.
pub fn noise_image(rng: &mut impl Rng, width: usize, height: usize) -> GrayImage {
    GrayImage::from_fn(width, height, |_, _| rng.gen())
}

pub fn random_binary(rng: &mut impl Rng, width: usize, height: usize) -> BinaryImage {
    BinaryImage::from_fn(width, height, |_, _| rng.gen_bool(0.5))
}
