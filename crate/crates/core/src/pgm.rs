//! Minimal PGM codec: P2 (ASCII) and P5 (binary) with maxval up to 255.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage};

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes).map_err(|msg| Error::Pgm {
        path: path.to_path_buf(),
        msg,
    })
}

/// Samples are rescaled to 0..=255 when maxval is smaller than 255.
pub fn parse_pgm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token().ok_or("missing magic number")?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            ))
        }
    };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(format!("zero-sized image {width}x{height}"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(format!("maxval {maxval} outside 1..=255"));
    }
    let n = width
        .checked_mul(height)
        .ok_or("image dimensions overflow")?;

    let raw: Vec<usize> = if binary {
        // exactly one whitespace byte separates the header from the raster
        cur.pos += 1;
        let data = bytes
            .get(cur.pos..cur.pos + n)
            .ok_or_else(|| format!("raster truncated: expected {n} bytes"))?;
        data.iter().map(|&b| b as usize).collect()
    } else {
        (0..n)
            .map(|i| cur.number(&format!("sample {i}")))
            .collect::<std::result::Result<_, _>>()?
    };

    let mut pixels = Vec::with_capacity(n);
    for v in raw {
        if v > maxval {
            return Err(format!("sample {v} exceeds maxval {maxval}"));
        }
        pixels.push(((v * 255 + maxval / 2) / maxval) as u8);
    }
    GrayImage::new(width, height, pixels).map_err(|e| e.to_string())
}

/// Writes a binary image as P5 with ink at 0 and background at 255.
/// `comments` become `#` lines after the magic number.
pub fn write_binary_pgm(path: &Path, img: &BinaryImage, comments: &[String]) -> Result<()> {
    let bytes = encode_binary_pgm(img, comments);
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn encode_binary_pgm(img: &BinaryImage, comments: &[String]) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.bits().len() + 64);
    out.extend_from_slice(b"P5\n");
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}").unwrap();
        }
    }
    writeln!(out, "{} {}\n255", img.width(), img.height()).unwrap();
    out.extend(img.bits().iter().map(|&b| if b { 0u8 } else { 255u8 }));
    out
}

pub fn encode_gray_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
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
        self.skip_space_and_comments();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> std::result::Result<usize, String> {
        let tok = self.token().ok_or_else(|| format!("missing {what}"))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("bad {what}: {:?}", String::from_utf8_lossy(tok)))
    }
}
