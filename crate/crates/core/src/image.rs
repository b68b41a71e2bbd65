//! Raster types, thresholding, canvas scaling and the minimal-square /
//! octant geometry that all feature extractors share.
//!
//! Geometry inside a [`MinimalSquare`] is done in *doubled* pixel-center
//! coordinates so that every comparison is an exact integer comparison:
//! for a pixel at square-relative `(r, c)` in a square of side `s`,
//!
//! ```text
//! U = 2c + 1 - s    (points right)
//! V = s - 2r - 1    (points up)
//! ```
//!
//! which is twice the `(u, v)` offset of the pixel center from the
//! square center.

use crate::error::{Error, Result};

/// Side length of the canonical glyph canvas.
pub const CANVAS: usize = 64;

/// Default global threshold: intensities strictly below it are ink.
pub const DEFAULT_THRESHOLD: u8 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero-sized image {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
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

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }
}

/// Row-major foreground mask; `true` is ink.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero-sized image {width}x{height}"
            )));
        }
        if bits.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} bits for a {width}x{height} image",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    /// All-background image.
    ///
    /// # Panics
    /// If either dimension is zero.
    pub fn blank(width: usize, height: usize) -> Self {
        Self::filled(width, height, false)
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        assert!(width > 0 && height > 0, "zero-sized image");
        Self {
            width,
            height,
            bits: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut img = Self::blank(width, height);
        for r in 0..height {
            for c in 0..width {
                img.bits[r * width + c] = f(r, c);
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Reads a pixel; anything outside the raster is background.
    #[inline]
    pub fn get(&self, row: i64, col: i64) -> bool {
        if row < 0 || col < 0 || row >= self.height as i64 || col >= self.width as i64 {
            return false;
        }
        self.bits[row as usize * self.width + col as usize]
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.height && col < self.width, "pixel out of range");
        self.bits[row * self.width + col] = value;
    }

    pub fn foreground_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Iterates `(row, col)` of every foreground pixel in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / w, i % w))
    }

    /// Shifts the content by `(dr, dc)`; pixels leaving the raster are lost.
    pub fn translated(&self, dr: i64, dc: i64) -> Self {
        Self::from_fn(self.width, self.height, |r, c| {
            self.get(r as i64 - dr, c as i64 - dc)
        })
    }

    /// Left-right mirror image.
    pub fn mirrored(&self) -> Self {
        let w = self.width;
        Self::from_fn(w, self.height, |r, c| self.bits[r * w + (w - 1 - c)])
    }

    /// Foreground bounding box as `(top, left, bottom, right)`, inclusive.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bbox: Option<(usize, usize, usize, usize)> = None;
        for (r, c) in self.foreground() {
            bbox = Some(match bbox {
                None => (r, c, r, c),
                Some((t, l, b, rt)) => (t.min(r), l.min(c), b.max(r), rt.max(c)),
            });
        }
        bbox
    }
}

/// Ink is every pixel strictly darker than `t`.
pub fn threshold(img: &GrayImage, t: u8) -> BinaryImage {
    BinaryImage {
        width: img.width,
        height: img.height,
        bits: img.pixels.iter().map(|&p| p < t).collect(),
    }
}

/// Nearest-neighbour resample onto the 64x64 canvas: output `(r, c)` reads
/// input `(floor(r*H/64), floor(c*W/64))`.
pub fn scale_to_canvas(img: &BinaryImage) -> BinaryImage {
    if img.width == CANVAS && img.height == CANVAS {
        return img.clone();
    }
    BinaryImage::from_fn(CANVAS, CANVAS, |r, c| {
        let sr = r * img.height / CANVAS;
        let sc = c * img.width / CANVAS;
        img.bits[sr * img.width + sc]
    })
}

/// Threshold then scale: the canonical ingestion path for a grayscale scan.
pub fn binarize(img: &GrayImage, t: u8) -> BinaryImage {
    scale_to_canvas(&threshold(img, t))
}

/// Tight square frame around the foreground. The origin may be negative
/// (or the far edge may pass the raster) when the bounding box is not square;
/// such cells read as background.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinimalSquare {
    pub row0: i64,
    pub col0: i64,
    pub side: usize,
}

impl MinimalSquare {
    pub fn contains(&self, row: i64, col: i64) -> bool {
        let s = self.side as i64;
        row >= self.row0 && row < self.row0 + s && col >= self.col0 && col < self.col0 + s
    }

    /// Doubled pixel-center coordinates `(U, V)` of an absolute pixel.
    #[inline]
    pub fn doubled_offset(&self, row: i64, col: i64) -> (i64, i64) {
        let s = self.side as i64;
        let u = 2 * (col - self.col0) + 1 - s;
        let v = s - 2 * (row - self.row0) - 1;
        (u, v)
    }
}

/// Side is the longer bounding-box extent; the shorter axis is centred with
/// `floor(slack / 2)` cells of padding before the box.
pub fn minimal_square(img: &BinaryImage) -> Result<MinimalSquare> {
    let (top, left, bottom, right) = img.bounding_box().ok_or(Error::EmptyImage)?;
    let bh = bottom - top + 1;
    let bw = right - left + 1;
    let side = bh.max(bw);
    Ok(MinimalSquare {
        row0: top as i64 - ((side - bh) / 2) as i64,
        col0: left as i64 - ((side - bw) / 2) as i64,
        side,
    })
}

/// One of the eight triangular sectors of a minimal square, numbered
/// counter-clockwise from east (math orientation, up is positive).
///
/// Octant `k` covers angles `[k*pi/4, (k+1)*pi/4)` about the square centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OctantId(u8);

impl OctantId {
    pub const ALL: [OctantId; 8] = [
        OctantId(0),
        OctantId(1),
        OctantId(2),
        OctantId(3),
        OctantId(4),
        OctantId(5),
        OctantId(6),
        OctantId(7),
    ];

    pub fn new(index: usize) -> Option<Self> {
        (index < 8).then_some(OctantId(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Sector of a doubled offset. The exact centre (only possible for odd
    /// sides) belongs to octant 0, matching `atan2(0, 0) = 0`.
    pub fn of_offset(u: i64, v: i64) -> Self {
        let k = if v >= 0 && v < u {
            0
        } else if u > 0 && v >= u {
            1
        } else if u <= 0 && v > 0 && v > -u {
            2
        } else if v > 0 && v <= -u {
            3
        } else if v <= 0 && u < 0 && v > u {
            4
        } else if u < 0 && v <= u {
            5
        } else if u >= 0 && v < 0 && v < -u {
            6
        } else if v < 0 && v >= -u {
            7
        } else {
            // only (0, 0) is left
            0
        };
        OctantId(k)
    }

    /// Maps a doubled offset inside this octant to `(P, Q)`: `P` is the
    /// distance from the centre towards the octant's outer edge, `Q` the
    /// distance along that edge from its midpoint towards the corner.
    /// Inside the octant `0 <= Q <= P`.
    #[inline]
    pub fn to_frame(self, u: i64, v: i64) -> (i64, i64) {
        match self.0 {
            0 => (u, v),
            1 => (v, u),
            2 => (v, -u),
            3 => (-u, v),
            4 => (-u, -v),
            5 => (-v, -u),
            6 => (-v, u),
            _ => (u, -v),
        }
    }

    /// Inverse of [`OctantId::to_frame`].
    pub fn from_frame(self, p: f64, q: f64) -> (f64, f64) {
        match self.0 {
            0 => (p, q),
            1 => (q, p),
            2 => (-q, p),
            3 => (-p, q),
            4 => (-p, -q),
            5 => (-q, -p),
            6 => (q, -p),
            _ => (p, -q),
        }
    }

    /// Image of this octant under a left-right mirror.
    pub fn mirrored(self) -> Self {
        OctantId([3, 2, 1, 0, 7, 6, 5, 4][self.index()])
    }
}

/// Octant of an absolute pixel that lies inside `sq`.
pub fn octant_of(row: i64, col: i64, sq: &MinimalSquare) -> OctantId {
    debug_assert!(sq.contains(row, col));
    let (u, v) = sq.doubled_offset(row, col);
    OctantId::of_offset(u, v)
}
