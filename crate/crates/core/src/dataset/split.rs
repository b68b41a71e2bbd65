use std::collections::BTreeMap;

use super::LabeledSample;
use crate::error::{Error, Result};
use crate::rng::{shuffle, stream_rng, SPLIT_STREAM_BASE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    /// Split every class separately (stratified) rather than the pool.
    pub per_class_equal: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 0,
            per_class_equal: true,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train fraction {} outside (0, 1)",
                self.train_fraction
            )));
        }
        Ok(())
    }

    fn train_count(&self, n: usize) -> usize {
        // the epsilon keeps e.g. 10 * 0.8 from flooring to 7
        ((n as f64 * self.train_fraction + 1e-9).floor() as usize).min(n)
    }
}

/// Partitions `corpus` into `(train, test)`.
///
/// Stratified: each class is shuffled with its own stream and its first
/// `floor(n_c * train_fraction)` members go to training. Unstratified: the
/// same rule over the whole pool. Both halves keep corpus order.
pub fn split(
    corpus: &[LabeledSample],
    spec: &SplitSpec,
) -> Result<(Vec<LabeledSample>, Vec<LabeledSample>)> {
    spec.validate()?;
    let mut in_train = vec![false; corpus.len()];

    if spec.per_class_equal {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, s) in corpus.iter().enumerate() {
            by_class.entry(s.class_id).or_default().push(i);
        }
        for (&class, members) in by_class.iter_mut() {
            if members.len() < 2 {
                return Err(Error::InsufficientClassSamples(class));
            }
            let mut rng = stream_rng(spec.seed, SPLIT_STREAM_BASE + class as u64);
            shuffle(members, &mut rng);
            for &i in &members[..spec.train_count(members.len())] {
                in_train[i] = true;
            }
        }
    } else {
        let mut order: Vec<usize> = (0..corpus.len()).collect();
        let mut rng = stream_rng(spec.seed, SPLIT_STREAM_BASE - 1);
        shuffle(&mut order, &mut rng);
        for &i in &order[..spec.train_count(order.len())] {
            in_train[i] = true;
        }
    }

    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (s, t) in corpus.iter().zip(in_train) {
        if t {
            train.push(s.clone());
        } else {
            test.push(s.clone());
        }
    }
    Ok((train, test))
}
