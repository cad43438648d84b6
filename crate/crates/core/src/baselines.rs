//! Classical convolution edge detectors used as comparison baselines:
//! Sobel gradient magnitude and Laplacian-of-Gaussian zero crossings.

use crate::edgemap::EdgeMap;
use crate::error::{Error, Result};
use crate::imgio::GrayImage;

pub const DEFAULT_SOBEL_SCALE: f64 = 4.0;
pub const DEFAULT_LOG_SIGMA: f64 = 2.0;
pub const DEFAULT_ZERO_CROSSING_THRESHOLD: f64 = 0.0;

/// A square kernel of odd size, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size.is_multiple_of(2) || weights.len() != size * size {
            return Err(Error::InvalidKernel(size));
        }
        Ok(Kernel { size, weights })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at `(row, col)`, with `(0, 0)` the top-left.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.size + col]
    }

    pub fn identity() -> Self {
        Kernel { size: 3, weights: vec![0., 0., 0., 0., 1., 0., 0., 0., 0.] }
    }

    /// Horizontal derivative (responds to vertical edges).
    pub fn sobel_x() -> Self {
        Kernel { size: 3, weights: vec![-1., 0., 1., -2., 0., 2., -1., 0., 1.] }
    }

    /// Vertical derivative (responds to horizontal edges).
    pub fn sobel_y() -> Self {
        Kernel { size: 3, weights: vec![-1., -2., -1., 0., 0., 0., 1., 2., 1.] }
    }

    /// Laplacian of a Gaussian with standard deviation `sigma`, sampled on a
    /// `2 * ceil(3 sigma) + 1` grid and shifted to sum to zero.
    pub fn laplacian_of_gaussian(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        let radius = (3.0 * sigma).ceil() as i64;
        let size = (2 * radius + 1) as usize;
        let s2 = sigma * sigma;
        let mut weights = Vec::with_capacity(size * size);
        for y in -radius..=radius {
            for x in -radius..=radius {
                let r2 = (x * x + y * y) as f64;
                weights.push((r2 - 2.0 * s2) / (s2 * s2) * (-r2 / (2.0 * s2)).exp());
            }
        }
        let mean = weights.iter().sum::<f64>() / weights.len() as f64;
        weights.iter_mut().for_each(|w| *w -= mean);
        Ok(Kernel { size, weights })
    }

    /// Transposed kernel.
    pub fn transpose(&self) -> Kernel {
        let n = self.size;
        Kernel { size: n, weights: (0..n * n).map(|i| self.get(i % n, i / n)).collect() }
    }
}

/// A real-valued raster, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl FloatImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if width.checked_mul(height) != Some(data.len()) {
            return Err(Error::DimensionMismatch { width, height, len: data.len() });
        }
        Ok(FloatImage { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }
}

impl From<&GrayImage> for FloatImage {
    fn from(img: &GrayImage) -> Self {
        FloatImage {
            width: img.width(),
            height: img.height(),
            data: img.pixels().iter().map(|&p| f64::from(p)).collect(),
        }
    }
}

/// Same-size 2-D convolution of a grayscale image with edge-replicated borders.
pub fn convolve(img: &GrayImage, kernel: &Kernel) -> Result<FloatImage> {
    convolve_real(&FloatImage::from(img), kernel)
}

/// [`convolve`] for real-valued input.
///
/// This is true convolution (the kernel is flipped), so
/// `out(r, c) = sum k(i, j) * img(r + h - i, c + h - j)` with `h` the kernel
/// radius and out-of-range coordinates clamped to the nearest edge.
pub fn convolve_real(img: &FloatImage, kernel: &Kernel) -> Result<FloatImage> {
    let (w, h, n) = (img.width, img.height, kernel.size);
    if n > w || n > h {
        return Err(Error::ImageTooSmall { width: w, height: h, min_width: n, min_height: n });
    }
    let radius = n / 2;
    // edge-replicated copy, so the inner loops run over plain slices
    let (pw, ph) = (w + 2 * radius, h + 2 * radius);
    let mut padded = Vec::with_capacity(pw * ph);
    for pr in 0..ph {
        let r = pr.saturating_sub(radius).min(h - 1);
        let src = &img.data[r * w..(r + 1) * w];
        padded.extend(std::iter::repeat_n(src[0], radius));
        padded.extend_from_slice(src);
        padded.extend(std::iter::repeat_n(src[w - 1], radius));
    }
    // true convolution: kernel cell (i, j) meets padded cell
    // (row + n - 1 - i, col + n - 1 - j)
    let mut data = vec![0.0; w * h];
    for row in 0..h {
        let out = &mut data[row * w..(row + 1) * w];
        for i in 0..n {
            let pr = row + n - 1 - i;
            let src_row = &padded[pr * pw..(pr + 1) * pw];
            for j in 0..n {
                let k = kernel.weights[i * n + j];
                if k == 0.0 {
                    continue;
                }
                let src = &src_row[n - 1 - j..n - 1 - j + w];
                for (o, &v) in out.iter_mut().zip(src) {
                    *o += k * v;
                }
            }
        }
    }
    Ok(FloatImage { width: w, height: h, data })
}

/// Sobel gradient magnitude `sqrt(gx^2 + gy^2)`.
pub fn sobel_magnitude(img: &GrayImage) -> Result<FloatImage> {
    let gx = convolve(img, &Kernel::sobel_x())?;
    let gy = convolve(img, &Kernel::sobel_y())?;
    let data = gx.data.iter().zip(&gy.data).map(|(x, y)| x.hypot(*y)).collect();
    Ok(FloatImage { width: gx.width, height: gx.height, data })
}

/// Sobel edges: interior pixels whose gradient magnitude exceeds `scale`
/// times the mean magnitude over the whole image.
pub fn sobel_edges(img: &GrayImage, scale: f64) -> Result<EdgeMap> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let mag = sobel_magnitude(img)?;
    let mean = mag.data.iter().sum::<f64>() / mag.data.len() as f64;
    let cutoff = scale * mean;
    Ok(EdgeMap::from_interior(mag.width, mag.height, |r, c| mag.get(r, c) > cutoff))
}

/// Laplacian-of-Gaussian zero crossings.
///
/// A crossing is a strict sign change between a pixel and its right or lower
/// neighbor with an absolute response difference above `zc_thresh`; the
/// pixel of the pair closer to zero is marked. Responses within rounding
/// noise of zero count as zero.
pub fn log_edges(img: &GrayImage, sigma: f64, zc_thresh: f64) -> Result<EdgeMap> {
    if !(zc_thresh.is_finite() && zc_thresh >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "zero-crossing threshold must be nonnegative, got {zc_thresh}"
        )));
    }
    let kernel = Kernel::laplacian_of_gaussian(sigma)?;
    let resp = convolve(img, &kernel)?;
    let floor = 1e-9 * 255.0 * kernel.weights.iter().map(|w| w.abs()).sum::<f64>();
    let sign = |v: f64| if v > floor { 1 } else if v < -floor { -1 } else { 0 };

    let (w, h) = (resp.width, resp.height);
    let mut marks = vec![false; w * h];
    let mut check = |a: usize, b: usize| {
        let (va, vb) = (resp.data[a], resp.data[b]);
        if sign(va) * sign(vb) < 0 && (va - vb).abs() > zc_thresh {
            marks[if va.abs() <= vb.abs() { a } else { b }] = true;
        }
    };
    for row in 0..h {
        for col in 0..w {
            let i = row * w + col;
            if col + 1 < w {
                check(i, i + 1);
            }
            if row + 1 < h {
                check(i, i + w);
            }
        }
    }
    Ok(EdgeMap::from_interior(w, h, |r, c| marks[r * w + c]))
}
