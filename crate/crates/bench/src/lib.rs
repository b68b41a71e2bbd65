//! Fixtures shared by the benchmarks.

use glyphrec::dataset::prototype;
use glyphrec::features::BoolGrid;
use glyphrec::{extract, BinaryImage, FeatureVector, MlpModel, FEATURE_LEN};

/// A synthetic class prototype on the 64x64 canvas.
pub fn glyph(class_id: usize) -> BinaryImage {
    prototype(class_id)
}

/// Checkerboard-ish grid with runs of varying length on every line.
pub fn grid(side: usize) -> BoolGrid {
    BoolGrid::from_fn(side, side, |r, c| (r * 7 + c * 3) % 5 != 0)
}

pub fn features(class_id: usize) -> FeatureVector {
    extract(&glyph(class_id)).expect("prototypes are nonempty")
}

/// A 76-60-50 network.
pub fn network() -> MlpModel {
    MlpModel::init_weights(FEATURE_LEN, 60, 50, 0)
}
