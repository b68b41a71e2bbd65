//! Procedural stand-in corpus.
//!
//! Each of the 50 classes is a fixed prototype glyph built from three of
//! twelve pen strokes (bars, arcs, diagonals and loops) drawn with a round
//! brush of radius 2 on the 64x64 canvas. Class `k` uses the `(4k + 1)`-th
//! 3-subset of the stroke catalogue in lexicographic order. Samples are the
//! prototype passed through, in order: thickening/thinning, an integer
//! shift, then independent pixel flips.
//!
//! Generator version 1. Changing strokes, brush or subset choice changes
//! every synthetic feature vector and must bump the version.

use rand::Rng;
use rayon::prelude::*;

use super::{LabeledSample, SampleSource, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::features::extract;
use crate::image::{BinaryImage, CANVAS};
use crate::rng::stream_rng;

pub const GENERATOR_VERSION: u32 = 1;

const BRUSH: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Stroke {
    /// (row, col) endpoints
    Line((f64, f64), (f64, f64)),
    /// centre (row, col), radius, start and end angle in degrees,
    /// counter-clockwise from east
    Arc((f64, f64), f64, f64, f64),
}

const STROKES: [Stroke; 12] = [
    Stroke::Line((12.0, 10.0), (12.0, 54.0)),
    Stroke::Line((12.0, 14.0), (52.0, 14.0)),
    Stroke::Line((12.0, 50.0), (52.0, 50.0)),
    Stroke::Line((12.0, 32.0), (52.0, 32.0)),
    Stroke::Line((32.0, 12.0), (32.0, 52.0)),
    Stroke::Line((52.0, 12.0), (52.0, 52.0)),
    Stroke::Line((14.0, 14.0), (52.0, 50.0)),
    Stroke::Line((14.0, 50.0), (52.0, 14.0)),
    Stroke::Arc((36.0, 32.0), 14.0, 0.0, 360.0),
    Stroke::Arc((32.0, 22.0), 10.0, 90.0, 270.0),
    Stroke::Arc((42.0, 40.0), 10.0, -90.0, 90.0),
    Stroke::Arc((24.0, 42.0), 6.0, 0.0, 360.0),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    /// Shift drawn uniformly from `-max..=max` on each axis.
    pub max_shift_px: u32,
    /// Probability of toggling each pixel independently.
    pub flip_prob: f64,
    /// Positive: dilate that many times; negative: erode.
    pub thickness_delta: i32,
}

impl Perturbation {
    pub const NONE: Perturbation = Perturbation {
        max_shift_px: 0,
        flip_prob: 0.0,
        thickness_delta: 0,
    };

    pub fn validate(&self) -> Result<()> {
        if self.max_shift_px > 16 {
            return Err(Error::InvalidConfig(format!(
                "max shift {} exceeds 16 px",
                self.max_shift_px
            )));
        }
        if !(0.0..=0.5).contains(&self.flip_prob) {
            return Err(Error::InvalidConfig(format!(
                "flip probability {} outside [0, 0.5]",
                self.flip_prob
            )));
        }
        if self.thickness_delta.abs() > 3 {
            return Err(Error::InvalidConfig(format!(
                "thickness delta {} outside -3..=3",
                self.thickness_delta
            )));
        }
        Ok(())
    }
}

impl Default for Perturbation {
    fn default() -> Self {
        Self::NONE
    }
}

fn stamp(img: &mut BinaryImage, r: f64, c: f64) {
    let reach = BRUSH.ceil() as i64 + 1;
    let (ri, ci) = (r.round() as i64, c.round() as i64);
    for y in ri - reach..=ri + reach {
        for x in ci - reach..=ci + reach {
            if y < 0 || x < 0 || y >= CANVAS as i64 || x >= CANVAS as i64 {
                continue;
            }
            let (dy, dx) = (y as f64 - r, x as f64 - c);
            if dy * dy + dx * dx <= BRUSH * BRUSH {
                img.set(y as usize, x as usize, true);
            }
        }
    }
}

fn draw(img: &mut BinaryImage, stroke: Stroke) {
    match stroke {
        Stroke::Line((r0, c0), (r1, c1)) => {
            let len = ((r1 - r0).powi(2) + (c1 - c0).powi(2)).sqrt();
            let n = (len * 2.0).ceil() as usize;
            for i in 0..=n {
                let t = i as f64 / n as f64;
                stamp(img, r0 + t * (r1 - r0), c0 + t * (c1 - c0));
            }
        }
        Stroke::Arc((rc, cc), radius, a0, a1) => {
            let sweep = (a1 - a0).to_radians();
            let n = (radius * sweep.abs() * 2.0).ceil() as usize;
            for i in 0..=n {
                let a = a0.to_radians() + sweep * i as f64 / n as f64;
                stamp(img, rc - radius * a.sin(), cc + radius * a.cos());
            }
        }
    }
}

fn stroke_subset(class_id: usize) -> [usize; 3] {
    let wanted = 4 * class_id + 1;
    let n = STROKES.len();
    let mut idx = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if idx == wanted {
                    return [a, b, c];
                }
                idx += 1;
            }
        }
    }
    unreachable!("class id out of range")
}

/// Noise-free glyph of a class.
///
/// # Panics
/// If `class_id >= NUM_CLASSES`.
pub fn prototype(class_id: usize) -> BinaryImage {
    assert!(class_id < NUM_CLASSES, "class id {class_id} out of range");
    let mut img = BinaryImage::blank(CANVAS, CANVAS);
    for s in stroke_subset(class_id) {
        draw(&mut img, STROKES[s]);
    }
    img
}

fn morph(img: &BinaryImage, dilate: bool) -> BinaryImage {
    BinaryImage::from_fn(img.width(), img.height(), |r, c| {
        let (r, c) = (r as i64, c as i64);
        let nb = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)]
            .iter()
            .map(|&(dr, dc)| img.get(r + dr, c + dc));
        if dilate {
            nb.into_iter().any(|b| b)
        } else {
            nb.into_iter().all(|b| b)
        }
    })
}

pub fn synth_sample_id(class_id: usize, index: usize) -> String {
    format!("synth-c{class_id:02}-{index:04}")
}

/// Regenerates one sample image. Random draws come from stream
/// `(class << 32) | index` of `seed`: row shift, column shift, then one
/// uniform draw per pixel in row-major order when `flip_prob > 0`.
///
/// Steps that would leave the canvas empty (thinning a stroke away,
/// shifting everything off-canvas, flipping all ink) are skipped.
pub fn synth_image(class_id: usize, index: usize, seed: u64, perturb: &Perturbation) -> BinaryImage {
    let mut img = prototype(class_id);
    let dilate = perturb.thickness_delta > 0;
    for _ in 0..perturb.thickness_delta.unsigned_abs() {
        let next = morph(&img, dilate);
        if next.foreground_count() == 0 {
            break;
        }
        img = next;
    }

    let mut rng = stream_rng(seed, ((class_id as u64) << 32) | index as u64);
    let m = perturb.max_shift_px as i64;
    let dr = rng.random_range(-m..=m);
    let dc = rng.random_range(-m..=m);
    let shifted = img.translated(dr, dc);
    if shifted.foreground_count() > 0 {
        img = shifted;
    }

    if perturb.flip_prob > 0.0 {
        let mut flipped = img.clone();
        for r in 0..CANVAS {
            for c in 0..CANVAS {
                if rng.random::<f64>() < perturb.flip_prob {
                    flipped.set(r, c, !img.get(r as i64, c as i64));
                }
            }
        }
        if flipped.foreground_count() > 0 {
            img = flipped;
        }
    }
    img
}

/// `per_class` samples of each class, class-major then index-minor.
pub fn synth_corpus(per_class: usize, seed: u64, perturb: &Perturbation) -> Result<Vec<LabeledSample>> {
    if per_class == 0 {
        return Err(Error::InvalidConfig("per-class count must be >= 1".into()));
    }
    perturb.validate()?;
    (0..NUM_CLASSES * per_class)
        .into_par_iter()
        .map(|i| {
            let (class_id, index) = (i / per_class, i % per_class);
            let img = synth_image(class_id, index, seed, perturb);
            Ok(LabeledSample {
                id: synth_sample_id(class_id, index),
                features: extract(&img)?,
                class_id,
                source: SampleSource::Synthetic {
                    seed,
                    class_id,
                    index,
                    perturb: *perturb,
                },
            })
        })
        .collect()
}
