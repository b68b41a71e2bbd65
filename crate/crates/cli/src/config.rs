//! Settings resolution: command-line flag, then `--config` file, then the
//! built-in default.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use glyphrec::dataset::{Perturbation, SplitSpec};
use glyphrec::trainer::{TrainConfig, DEFAULT_SWEEP_SIZES};
use glyphrec::DEFAULT_THRESHOLD;
use serde::Deserialize;

use crate::CliError;

/// Keys accepted in a TOML config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub threshold: Option<u8>,
    pub seed: Option<u64>,
    pub eta: Option<f64>,
    pub alpha: Option<f64>,
    pub epochs: Option<usize>,
    pub hidden: Option<usize>,
    pub shuffle: Option<bool>,
    pub train_fraction: Option<f64>,
    pub stratified: Option<bool>,
    pub per_class: Option<usize>,
    pub max_shift: Option<u32>,
    pub flip_prob: Option<f64>,
    pub thickness: Option<i32>,
    pub sizes: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {}", path.display(), e.message())))
    }
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// CSV manifest with header `path,label`
    #[arg(long, group = "corpus")]
    pub manifest: Option<PathBuf>,

    /// Use the procedural corpus instead of a manifest
    #[arg(long, group = "corpus")]
    pub synthetic: bool,

    /// Synthetic samples per class [default: 10]
    #[arg(long)]
    pub per_class: Option<usize>,

    /// Synthetic: maximum shift in pixels [default: 0]
    #[arg(long)]
    pub max_shift: Option<u32>,

    /// Synthetic: per-pixel flip probability [default: 0]
    #[arg(long)]
    pub flip_prob: Option<f64>,

    /// Synthetic: dilations (>0) or erosions (<0) [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub thickness: Option<i32>,

    /// Binarisation threshold for scanned images [default: 128]
    #[arg(long)]
    pub threshold: Option<u8>,

    /// Seed for the corpus, the split, initialisation and shuffling [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,

    /// Fraction of each class used for training [default: 0.8]
    #[arg(long)]
    pub train_fraction: Option<f64>,

    /// Split the pooled corpus instead of class by class
    #[arg(long)]
    pub pooled: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Learning rate [default: 0.8]
    #[arg(long)]
    pub eta: Option<f64>,

    /// Momentum [default: 0.7]
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Training epochs [default: 500]
    #[arg(long)]
    pub epochs: Option<usize>,

    /// Keep the sample order fixed across epochs
    #[arg(long)]
    pub no_shuffle: bool,

    /// Print a progress line every N epochs (0 = never)
    #[arg(long, default_value_t = 0)]
    pub log_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSource {
    Manifest(PathBuf),
    Synthetic {
        per_class: usize,
        perturb: Perturbation,
    },
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub source: CorpusSource,
    pub threshold: u8,
    pub split: SplitSpec,
    pub train: TrainConfig,
}

impl Settings {
    pub fn resolve(
        corpus: &CorpusArgs,
        train: Option<&TrainArgs>,
        hidden: Option<usize>,
        file: &FileConfig,
    ) -> Result<Self, CliError> {
        let seed = corpus.seed.or(file.seed).unwrap_or(0);
        let source = if let Some(m) = &corpus.manifest {
            CorpusSource::Manifest(m.clone())
        } else if corpus.synthetic {
            CorpusSource::Synthetic {
                per_class: corpus.per_class.or(file.per_class).unwrap_or(10),
                perturb: Perturbation {
                    max_shift_px: corpus.max_shift.or(file.max_shift).unwrap_or(0),
                    flip_prob: corpus.flip_prob.or(file.flip_prob).unwrap_or(0.0),
                    thickness_delta: corpus.thickness.or(file.thickness).unwrap_or(0),
                },
            }
        } else {
            return Err(CliError::Usage(
                "one corpus source is required: --manifest PATH or --synthetic".into(),
            ));
        };

        let defaults = TrainConfig::default();
        let train_cfg = TrainConfig {
            eta: train.and_then(|t| t.eta).or(file.eta).unwrap_or(defaults.eta),
            alpha: train
                .and_then(|t| t.alpha)
                .or(file.alpha)
                .unwrap_or(defaults.alpha),
            epochs: train
                .and_then(|t| t.epochs)
                .or(file.epochs)
                .unwrap_or(defaults.epochs),
            n_hidden: hidden.or(file.hidden).unwrap_or(defaults.n_hidden),
            seed,
            shuffle_each_epoch: if train.is_some_and(|t| t.no_shuffle) {
                false
            } else {
                file.shuffle.unwrap_or(defaults.shuffle_each_epoch)
            },
        };

        let settings = Settings {
            source,
            threshold: corpus.threshold.or(file.threshold).unwrap_or(DEFAULT_THRESHOLD),
            split: SplitSpec {
                train_fraction: corpus
                    .train_fraction
                    .or(file.train_fraction)
                    .unwrap_or(0.8),
                seed,
                per_class_equal: !corpus.pooled && file.stratified.unwrap_or(true),
            },
            train: train_cfg,
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |e: glyphrec::Error| CliError::Usage(e.to_string());
        self.split.validate().map_err(usage)?;
        self.train.validate().map_err(usage)?;
        if let CorpusSource::Synthetic { per_class, perturb } = &self.source {
            if *per_class == 0 {
                return Err(CliError::Usage("--per-class must be >= 1".into()));
            }
            perturb.validate().map_err(usage)?;
        }
        Ok(())
    }

    /// `key=value` lines echoed into every artifact.
    pub fn describe(&self) -> Vec<String> {
        let mut lines = vec![format!("glyphrec {}", env!("CARGO_PKG_VERSION"))];
        match &self.source {
            CorpusSource::Manifest(p) => lines.push(format!("corpus=manifest:{}", p.display())),
            CorpusSource::Synthetic { per_class, perturb } => lines.push(format!(
                "corpus=synthetic v{} per_class={} max_shift={} flip_prob={} thickness={}",
                glyphrec::dataset::GENERATOR_VERSION,
                per_class,
                perturb.max_shift_px,
                perturb.flip_prob,
                perturb.thickness_delta
            )),
        }
        lines.push(format!(
            "threshold={} train_fraction={} stratified={}",
            self.threshold, self.split.train_fraction, self.split.per_class_equal
        ));
        lines.push(self.train.describe());
        lines
    }
}

pub fn resolve_sizes(flag: Option<&[usize]>, file: &FileConfig) -> Result<Vec<usize>, CliError> {
    let sizes = flag
        .map(<[usize]>::to_vec)
        .or_else(|| file.sizes.clone())
        .unwrap_or_else(|| DEFAULT_SWEEP_SIZES.to_vec());
    if sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one size".into()));
    }
    if sizes.contains(&0) {
        return Err(CliError::Usage("hidden sizes must be >= 1".into()));
    }
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sizes.len() {
        return Err(CliError::Usage("--sizes lists a size twice".into()));
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus() -> CorpusArgs {
        CorpusArgs {
            manifest: None,
            synthetic: true,
            per_class: None,
            max_shift: None,
            flip_prob: None,
            thickness: None,
            threshold: None,
            seed: None,
            train_fraction: None,
            pooled: false,
        }
    }

    #[test]
    fn defaults() {
        let s = Settings::resolve(&corpus(), None, None, &FileConfig::default()).unwrap();
        assert_eq!(s.train, TrainConfig::default());
        assert_eq!(s.threshold, 128);
        assert_eq!(s.split, SplitSpec::default());
        assert_eq!(
            s.source,
            CorpusSource::Synthetic { per_class: 10, perturb: Perturbation::NONE }
        );
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let file: FileConfig = toml::from_str("eta = 0.5\nalpha = 0.2\nseed = 4\nper_class = 3").unwrap();
        let train = TrainArgs {
            eta: Some(0.3),
            alpha: None,
            epochs: None,
            no_shuffle: false,
            log_every: 0,
        };
        let mut c = corpus();
        c.seed = Some(9);
        let s = Settings::resolve(&c, Some(&train), None, &file).unwrap();
        assert_eq!(s.train.eta, 0.3);
        assert_eq!(s.train.alpha, 0.2);
        assert_eq!(s.train.epochs, 500);
        assert_eq!(s.train.seed, 9);
        assert_eq!(s.split.seed, 9);
        assert!(matches!(s.source, CorpusSource::Synthetic { per_class: 3, .. }));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(toml::from_str::<FileConfig>("learning_rate = 1").is_err());
        let file: FileConfig = toml::from_str("alpha = 1.5").unwrap();
        assert!(matches!(
            Settings::resolve(&corpus(), None, None, &file),
            Err(CliError::Usage(_))
        ));
        let mut c = corpus();
        c.synthetic = false;
        assert!(matches!(
            Settings::resolve(&c, None, None, &FileConfig::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn sizes() {
        let file = FileConfig::default();
        assert_eq!(resolve_sizes(None, &file).unwrap().len(), 9);
        assert_eq!(resolve_sizes(Some(&[60]), &file).unwrap(), vec![60]);
        assert!(resolve_sizes(Some(&[0]), &file).is_err());
        assert!(resolve_sizes(Some(&[5, 5]), &file).is_err());
    }
}
