//! Handwritten glyph recognition: 76 geometric features (octant shadows,
//! octant centroids, regional longest runs) computed on a 64x64 binary
//! canvas, classified by a one-hidden-layer sigmoid MLP trained with online
//! backpropagation and momentum.
//!
//! ```
//! use glyphrec::{extract, BinaryImage, MlpModel};
//!
//! let glyph = BinaryImage::from_fn(64, 64, |r, c| (8..56).contains(&r) && (c == 20 || c == 43));
//! let features = extract(&glyph).unwrap();
//! let model = MlpModel::init_weights(76, 60, 50, 7);
//! let class = model.predict(features.as_slice()).unwrap();
//! assert!(class < 50);
//! ```

pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod image;
pub mod mlp;
pub mod pgm;
pub mod rng;
pub mod trainer;

pub use dataset::{LabeledSample, Perturbation, SampleSource, SplitSpec, NUM_CLASSES};
pub use error::{Error, Result};
pub use eval::{evaluate, EvalReport};
pub use features::{extract, FeatureVector, FEATURE_LEN};
pub use image::{
    binarize, minimal_square, octant_of, scale_to_canvas, threshold, BinaryImage, GrayImage,
    MinimalSquare, OctantId, CANVAS, DEFAULT_THRESHOLD,
};
pub use mlp::{sigmoid, sse_loss, MlpModel, TrainTarget};
pub use trainer::{sweep, train, SweepResult, TrainConfig, TrainHistory};
