//! The 76-element glyph descriptor.
//!
//! Layout of a [`FeatureVector`]:
//!
//! | indices | family      | order                                                        |
//! |---------|-------------|--------------------------------------------------------------|
//! | 0..24   | shadow      | octant-major; per octant sides a (edge), b (half-diagonal), c (half-midline) |
//! | 24..40  | centroid    | octant-major; per octant (row, col)                           |
//! | 40..76  | longest-run | region-major over the 3x3 grid; per region row, column, diagonal, anti-diagonal |
//!
//! Every value lies in `[0, 1]` and an all-ink square maps the shadow and
//! longest-run families to exactly 1. All geometry is relative to the
//! minimal square, so translating a glyph leaves its vector bit-identical.

mod centroid;
mod longest_run;
mod shadow;

pub use centroid::{centroid_features, empty_octant_centroid};
pub use longest_run::{longest_bar_sum, longest_run_features, regions, BoolGrid, Direction, Region};
pub use shadow::{shadow_bins, shadow_features, side_bin_counts};

use crate::error::{Error, Result};
use crate::image::{minimal_square, BinaryImage, CANVAS};

pub const SHADOW_LEN: usize = 24;
pub const CENTROID_LEN: usize = 16;
pub const LONGEST_RUN_LEN: usize = 36;
pub const FEATURE_LEN: usize = SHADOW_LEN + CENTROID_LEN + LONGEST_RUN_LEN;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector([f64; FEATURE_LEN]);

impl FeatureVector {
    pub fn from_parts(
        shadow: &[f64; SHADOW_LEN],
        centroid: &[f64; CENTROID_LEN],
        longest_run: &[f64; LONGEST_RUN_LEN],
    ) -> Self {
        let mut v = [0.0; FEATURE_LEN];
        v[..SHADOW_LEN].copy_from_slice(shadow);
        v[SHADOW_LEN..SHADOW_LEN + CENTROID_LEN].copy_from_slice(centroid);
        v[SHADOW_LEN + CENTROID_LEN..].copy_from_slice(longest_run);
        FeatureVector(v)
    }

    /// Validates length and range.
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        let arr: [f64; FEATURE_LEN] =
            values.try_into().map_err(|_| Error::DimensionMismatch {
                expected: FEATURE_LEN,
                got: values.len(),
            })?;
        if let Some(bad) = arr.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidConfig(format!(
                "feature value {bad} outside [0, 1]"
            )));
        }
        Ok(FeatureVector(arr))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn shadow(&self) -> &[f64] {
        &self.0[..SHADOW_LEN]
    }

    pub fn centroid(&self) -> &[f64] {
        &self.0[SHADOW_LEN..SHADOW_LEN + CENTROID_LEN]
    }

    pub fn longest_run(&self) -> &[f64] {
        &self.0[SHADOW_LEN + CENTROID_LEN..]
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Full descriptor of a canonical 64x64 glyph.
pub fn extract(img: &BinaryImage) -> Result<FeatureVector> {
    if img.width() != CANVAS || img.height() != CANVAS {
        return Err(Error::InvalidImage(format!(
            "expected a {CANVAS}x{CANVAS} canvas, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    let sq = minimal_square(img)?;
    Ok(FeatureVector::from_parts(
        &shadow_features(img, &sq),
        &centroid_features(img, &sq),
        &longest_run_features(img, &sq),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::MinimalSquare;

    #[test]
    fn all_ink_canvas() {
        let fv = extract(&BinaryImage::filled(64, 64, true)).unwrap();
        assert_eq!(fv.as_slice().len(), 76);
        assert!(fv.shadow().iter().all(|&x| x == 1.0));
        assert!(fv.longest_run().iter().all(|&x| x == 1.0));
        let sq = MinimalSquare { row0: 0, col0: 0, side: 64 };
        let cent = centroid_features(&BinaryImage::filled(64, 64, true), &sq);
        assert_eq!(fv.centroid(), &cent[..]);
    }

    #[test]
    fn empty_canvas_is_refused() {
        assert!(matches!(
            extract(&BinaryImage::blank(64, 64)),
            Err(Error::EmptyImage)
        ));
    }

    #[test]
    fn wrong_canvas_is_refused() {
        assert!(matches!(
            extract(&BinaryImage::filled(32, 32, true)),
            Err(Error::InvalidImage(_))
        ));
    }

    #[test]
    fn translation_by_five_columns() {
        let img = BinaryImage::from_fn(64, 64, |r, c| {
            (10..40).contains(&r) && (5..30).contains(&c) && (r * 3 + c) % 4 != 0
        });
        let moved = img.translated(0, 5);
        assert_eq!(moved.foreground_count(), img.foreground_count());
        assert_eq!(extract(&img).unwrap(), extract(&moved).unwrap());
    }

    #[test]
    fn from_slice_validates() {
        assert!(FeatureVector::from_slice(&[0.5; 75]).is_err());
        assert!(FeatureVector::from_slice(&[1.5; 76]).is_err());
        assert!(FeatureVector::from_slice(&[0.5; 76]).is_ok());
    }
}
