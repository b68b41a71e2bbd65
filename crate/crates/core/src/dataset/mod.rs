//! Labelled corpora: manifest-driven ingestion of PGM scans, stratified
//! train/test splitting and a procedural stand-in corpus.

mod manifest;
mod split;
mod synth;

pub use manifest::{load_corpus, load_manifest, ManifestEntry};
pub use split::{split, SplitSpec};
pub use synth::{
    prototype, synth_corpus, synth_image, synth_sample_id, Perturbation, GENERATOR_VERSION,
};

use std::path::PathBuf;

use crate::features::FeatureVector;

/// Number of character classes; labels are opaque ids `0..NUM_CLASSES`.
pub const NUM_CLASSES: usize = 50;

/// Where a sample's image came from, enough to re-create it.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleSource {
    File(PathBuf),
    Synthetic {
        seed: u64,
        class_id: usize,
        index: usize,
        perturb: Perturbation,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub id: String,
    pub features: FeatureVector,
    pub class_id: usize,
    pub source: SampleSource,
}
