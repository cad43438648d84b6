//! PGM (P2/P5) reading and writing, plus rendering of edge maps.
//!
//! Coordinates are `(row, col)`, 0-based, with the origin at the top-left
//! pixel. A pixel at 1-based `(x, y)` in the usual image-processing notation
//! lives at `(x - 1, y - 1)` here.

use thiserror::Error;

use crate::edgemap::EdgeMap;
use crate::error::{Error, Result};

/// An 8-bit grayscale raster stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Wraps a row-major pixel buffer. Both dimensions must be positive.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::DimensionMismatch { width, height, len: pixels.len() });
        }
        Ok(GrayImage { width, height, pixels })
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    ///
    /// # Panics
    ///
    /// If either dimension is zero.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        GrayImage { width, height, pixels }
    }

    /// An image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// The pixel at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }
}

/// A header or raster element that failed to parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmField {
    Width,
    Height,
    Maxval,
    /// 0-based sample index in the raster.
    Sample(usize),
}

impl std::fmt::Display for PgmField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PgmField::Width => f.write_str("width"),
            PgmField::Height => f.write_str("height"),
            PgmField::Maxval => f.write_str("maxval"),
            PgmField::Sample(i) => write!(f, "sample {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("bad magic number {0:?}; expected \"P2\" or \"P5\"")]
    BadMagic(String),

    #[error("missing {0} in PGM data")]
    Missing(PgmField),

    #[error("{field} is not a number: {token:?}")]
    NotNumeric { field: PgmField, token: String },

    #[error("{0} must be positive")]
    Zero(PgmField),

    #[error("maxval {0} exceeds 255; only 8-bit PGM is supported")]
    MaxvalTooLarge(u32),

    #[error("raster truncated: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("sample {index} has value {value} above maxval {maxval}")]
    SampleAboveMaxval { index: usize, value: u32, maxval: u32 },
}

enum Encoding {
    Ascii,
    Binary,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, field: PgmField) -> Result<u32, PgmError> {
        let token = self.token().ok_or(PgmError::Missing(field))?;
        std::str::from_utf8(token)
            .ok()
            .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| PgmError::NotNumeric {
                field,
                token: String::from_utf8_lossy(token).into_owned(),
            })
    }
}

/// Parses a P5 (binary) or P2 (ASCII) graymap with maxval at most 255.
///
/// Sample values are returned as stored; no rescaling to 255 is applied when
/// maxval is smaller.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let encoding = match bytes.get(..2) {
        Some(b"P5") => Encoding::Binary,
        Some(b"P2") => Encoding::Ascii,
        other => {
            let shown = other.unwrap_or(bytes);
            return Err(PgmError::BadMagic(String::from_utf8_lossy(shown).into_owned()));
        }
    };
    // the magic must be followed by whitespace (or a comment)
    if let Some(&b) = bytes.get(2) {
        if !(b.is_ascii_whitespace() || b == b'#') {
            return Err(PgmError::BadMagic(String::from_utf8_lossy(&bytes[..3]).into_owned()));
        }
    }
    let mut cur = Cursor { bytes, pos: 2 };

    let width = cur.number(PgmField::Width)? as usize;
    let height = cur.number(PgmField::Height)? as usize;
    let maxval = cur.number(PgmField::Maxval)?;
    if width == 0 {
        return Err(PgmError::Zero(PgmField::Width));
    }
    if height == 0 {
        return Err(PgmError::Zero(PgmField::Height));
    }
    if maxval == 0 {
        return Err(PgmError::Zero(PgmField::Maxval));
    }
    if maxval > 255 {
        return Err(PgmError::MaxvalTooLarge(maxval));
    }
    let expected = width * height;

    let pixels = match encoding {
        Encoding::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            let start = cur.pos + 1;
            let raster = bytes.get(start..).unwrap_or(&[]);
            if raster.len() < expected {
                return Err(PgmError::Truncated { expected, found: raster.len() });
            }
            let raster = &raster[..expected];
            if let Some(index) = raster.iter().position(|&v| u32::from(v) > maxval) {
                return Err(PgmError::SampleAboveMaxval {
                    index,
                    value: u32::from(raster[index]),
                    maxval,
                });
            }
            raster.to_vec()
        }
        Encoding::Ascii => {
            let mut pixels = Vec::with_capacity(expected);
            for index in 0..expected {
                let value = match cur.number(PgmField::Sample(index)) {
                    Ok(v) => v,
                    Err(PgmError::Missing(_)) => {
                        return Err(PgmError::Truncated { expected, found: index })
                    }
                    Err(e) => return Err(e),
                };
                if value > maxval {
                    return Err(PgmError::SampleAboveMaxval { index, value, maxval });
                }
                pixels.push(value as u8);
            }
            pixels
        }
    };

    Ok(GrayImage { width, height, pixels })
}

/// Encodes `img` as binary P5 with maxval 255.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.pixels);
    out
}

/// White-on-black rendering: edge pixels become 255, everything else 0.
pub fn render_edges(edges: &EdgeMap) -> GrayImage {
    let pixels = edges.bits().iter().map(|&b| if b == 1 { 255 } else { 0 }).collect();
    GrayImage { width: edges.width(), height: edges.height(), pixels }
}
