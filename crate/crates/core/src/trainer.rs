//! Epoch loop and the hidden-layer size sweep.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dataset::{LabeledSample, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::features::FEATURE_LEN;
use crate::mlp::{argmax, MlpModel, TrainTarget};
use crate::rng::{shuffle, stream_rng, SHUFFLE_STREAM};

pub const DEFAULT_SWEEP_SIZES: [usize; 9] = [35, 40, 45, 50, 55, 60, 65, 70, 75];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub eta: f64,
    pub alpha: f64,
    pub epochs: usize,
    pub n_hidden: usize,
    pub seed: u64,
    pub shuffle_each_epoch: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            eta: 0.8,
            alpha: 0.7,
            epochs: 500,
            n_hidden: 60,
            seed: 0,
            shuffle_each_epoch: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad(format!("learning rate {} must be > 0", self.eta));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return bad(format!("momentum {} outside [0, 1)", self.alpha));
        }
        if self.epochs == 0 {
            return bad("epochs must be >= 1".into());
        }
        if self.n_hidden == 0 {
            return bad("hidden size must be >= 1".into());
        }
        Ok(())
    }

    /// `key=value` pairs for artifact headers.
    pub fn describe(&self) -> String {
        format!(
            "eta={} alpha={} epochs={} hidden={} seed={} shuffle={}",
            self.eta, self.alpha, self.epochs, self.n_hidden, self.seed, self.shuffle_each_epoch
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    /// Mean per-sample SSE over the training set after the epoch.
    pub mean_sse: f64,
    pub train_acc: f64,
    /// `None` when the test set is empty.
    pub test_acc: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainHistory {
    pub records: Vec<EpochRecord>,
}

impl TrainHistory {
    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    /// `epoch,sse,train_acc,test_acc`; `comments` become leading `#` lines.
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = comment_block(comments);
        out.push_str("epoch,sse,train_acc,test_acc\n");
        for r in &self.records {
            let test = r.test_acc.map(|a| a.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{}", r.epoch, r.mean_sse, r.train_acc, test).unwrap();
        }
        out
    }
}

pub(crate) fn comment_block(comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            writeln!(out, "# {line}").unwrap();
        }
    }
    out
}

fn check_samples(set: &[LabeledSample]) -> Result<()> {
    for s in set {
        if s.class_id >= NUM_CLASSES {
            return Err(Error::DimensionMismatch {
                expected: NUM_CLASSES,
                got: s.class_id + 1,
            });
        }
        if s.features.as_slice().len() != FEATURE_LEN {
            return Err(Error::DimensionMismatch {
                expected: FEATURE_LEN,
                got: s.features.as_slice().len(),
            });
        }
    }
    Ok(())
}

/// (mean SSE, accuracy)
fn measure(model: &MlpModel, set: &[LabeledSample]) -> Result<(f64, f64)> {
    let mut sse = 0.0;
    let mut correct = 0usize;
    for s in set {
        let out = model.forward(s.features.as_slice())?.output;
        let target = TrainTarget::new(s.class_id, model.n_out())?;
        sse += crate::mlp::sse_loss(&out, &target)?;
        if argmax(&out) == s.class_id {
            correct += 1;
        }
    }
    let n = set.len() as f64;
    Ok((sse / n, correct as f64 / n))
}

/// Trains a fresh `76-n_hidden-50` network with one online update per
/// training sample per epoch.
///
/// Deterministic: weights come from the init stream of `config.seed`, the
/// per-epoch Fisher-Yates permutation from its shuffle stream (one
/// permutation drawn at the start of each epoch, applied to the current
/// order). Metrics are recorded after every epoch.
pub fn train(
    trainset: &[LabeledSample],
    testset: &[LabeledSample],
    config: &TrainConfig,
) -> Result<(MlpModel, TrainHistory)> {
    train_with(trainset, testset, config, |_| {})
}

/// [`train`] with a callback invoked after every epoch.
pub fn train_with(
    trainset: &[LabeledSample],
    testset: &[LabeledSample],
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<(MlpModel, TrainHistory)> {
    config.validate()?;
    if trainset.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    check_samples(trainset)?;
    check_samples(testset)?;

    let mut model = MlpModel::init_weights(FEATURE_LEN, config.n_hidden, NUM_CLASSES, config.seed);
    let targets: Vec<TrainTarget> = trainset
        .iter()
        .map(|s| TrainTarget::new(s.class_id, NUM_CLASSES))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..trainset.len()).collect();
    let mut rng = stream_rng(config.seed, SHUFFLE_STREAM);
    let mut history = TrainHistory::default();

    for epoch in 1..=config.epochs {
        if config.shuffle_each_epoch {
            shuffle(&mut order, &mut rng);
        }
        for &i in &order {
            model.backprop_step(
                trainset[i].features.as_slice(),
                &targets[i],
                config.eta,
                config.alpha,
            )?;
        }
        let (mean_sse, train_acc) = measure(&model, trainset)?;
        let test_acc = if testset.is_empty() {
            None
        } else {
            Some(measure(&model, testset)?.1)
        };
        let record = EpochRecord {
            epoch,
            mean_sse,
            train_acc,
            test_acc,
        };
        on_epoch(&record);
        history.records.push(record);
    }
    Ok((model, history))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n_hidden: usize,
    pub train_acc: f64,
    pub test_acc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Ascending by hidden size.
    pub rows: Vec<SweepRow>,
    pub chosen: usize,
}

impl SweepResult {
    /// Highest test accuracy; ties go to the smaller hidden layer.
    pub fn select(rows: &[SweepRow]) -> Option<usize> {
        let mut best: Option<&SweepRow> = None;
        for r in rows {
            best = match best {
                Some(b) if r.test_acc < b.test_acc => Some(b),
                Some(b) if r.test_acc == b.test_acc && b.n_hidden <= r.n_hidden => Some(b),
                _ => Some(r),
            };
        }
        best.map(|r| r.n_hidden)
    }

    /// `n_hidden,train_acc,test_acc`
    pub fn to_csv(&self, comments: &[String]) -> String {
        let mut out = comment_block(comments);
        out.push_str("n_hidden,train_acc,test_acc\n");
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.n_hidden, r.train_acc, r.test_acc).unwrap();
        }
        out
    }
}

/// One training run per hidden size, seeded with `base.seed + size`.
/// Runs are independent and execute in parallel; rows come back sorted by
/// size.
pub fn sweep(
    trainset: &[LabeledSample],
    testset: &[LabeledSample],
    hidden_sizes: &[usize],
    base: &TrainConfig,
) -> Result<SweepResult> {
    if hidden_sizes.is_empty() {
        return Err(Error::InvalidConfig("no hidden sizes to sweep".into()));
    }
    if testset.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sizes = hidden_sizes.to_vec();
    sizes.sort_unstable();
    if let Some(w) = sizes.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidConfig(format!("hidden size {} listed twice", w[0])));
    }
    let rows = sizes
        .par_iter()
        .map(|&n_hidden| {
            let config = TrainConfig {
                n_hidden,
                seed: base.seed.wrapping_add(n_hidden as u64),
                ..*base
            };
            let (_, history) = train(trainset, testset, &config)?;
            let last = history.last().expect("epochs >= 1");
            Ok(SweepRow {
                n_hidden,
                train_acc: last.train_acc,
                test_acc: last.test_acc.expect("test set is nonempty"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let chosen = SweepResult::select(&rows).expect("rows nonempty");
    Ok(SweepResult { rows, chosen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{synth_corpus, Perturbation};

    fn row(n: usize, test: f64) -> SweepRow {
        SweepRow { n_hidden: n, train_acc: 1.0, test_acc: test }
    }

    #[test]
    fn selection_rule() {
        assert_eq!(SweepResult::select(&[row(60, 0.5)]), Some(60));
        assert_eq!(SweepResult::select(&[row(40, 0.7), row(60, 0.7)]), Some(40));
        assert_eq!(SweepResult::select(&[row(60, 0.7), row(40, 0.7)]), Some(40));
        assert_eq!(SweepResult::select(&[row(40, 0.6), row(60, 0.7), row(70, 0.65)]), Some(60));
        assert_eq!(SweepResult::select(&[]), None);
    }

    #[test]
    fn config_validation() {
        let ok = TrainConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            TrainConfig { eta: 0.0, ..ok },
            TrainConfig { alpha: 1.0, ..ok },
            TrainConfig { alpha: -0.1, ..ok },
            TrainConfig { epochs: 0, ..ok },
            TrainConfig { n_hidden: 0, ..ok },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn one_epoch_one_sample() {
        let corpus = synth_corpus(1, 0, &Perturbation::NONE).unwrap();
        let config = TrainConfig { epochs: 1, n_hidden: 5, seed: 3, ..Default::default() };
        let (model, history) = train(&corpus[..1], &[], &config).unwrap();
        assert_eq!(history.records.len(), 1);
        assert_eq!(history.records[0].test_acc, None);

        let mut manual = MlpModel::init_weights(76, 5, 50, 3);
        let t = TrainTarget::new(0, 50).unwrap();
        manual.backprop_step(corpus[0].features.as_slice(), &t, 0.8, 0.7).unwrap();
        assert_eq!(model, manual);
    }

    #[test]
    fn empty_train_set() {
        assert!(matches!(
            train(&[], &[], &TrainConfig::default()),
            Err(Error::EmptyTrainSet)
        ));
    }

    #[test]
    fn deterministic_and_loss_decreases() {
        let corpus = synth_corpus(1, 0, &Perturbation::NONE).unwrap();
        let config = TrainConfig { epochs: 30, n_hidden: 20, seed: 1, ..Default::default() };
        let (m1, h1) = train(&corpus, &corpus, &config).unwrap();
        let (m2, h2) = train(&corpus, &corpus, &config).unwrap();
        assert_eq!(m1.to_text(&[]), m2.to_text(&[]));
        assert_eq!(h1, h2);
        assert!(h1.records.last().unwrap().mean_sse < h1.records[0].mean_sse);
    }

    #[test]
    fn sweep_rows_sorted_and_seeded_per_size() {
        let corpus = synth_corpus(1, 0, &Perturbation::NONE).unwrap();
        let base = TrainConfig { epochs: 2, seed: 10, ..Default::default() };
        let res = sweep(&corpus, &corpus, &[8, 4], &base).unwrap();
        assert_eq!(res.rows.iter().map(|r| r.n_hidden).collect::<Vec<_>>(), vec![4, 8]);
        let (_, h) = train(&corpus, &corpus, &TrainConfig { n_hidden: 4, seed: 14, ..base }).unwrap();
        assert_eq!(res.rows[0].test_acc, h.last().unwrap().test_acc.unwrap());
        assert_eq!(Some(res.chosen), SweepResult::select(&res.rows));
        assert!(sweep(&corpus, &corpus, &[], &base).is_err());
        assert!(sweep(&corpus, &corpus, &[4, 4], &base).is_err());
    }
}
