//! Model, split, training and evaluation properties.

use std::collections::HashMap;

use glyphrec::dataset::{split, synth_corpus, LabeledSample, Perturbation, SampleSource, SplitSpec};
use glyphrec::mlp::{sse_loss, MlpModel, TrainTarget};
use glyphrec::rng::stream_rng;
use glyphrec::trainer::{sweep, train, SweepResult, TrainConfig};
use glyphrec::{evaluate, FeatureVector, FEATURE_LEN};
use proptest::prelude::*;
use rand::Rng;

fn random_set(seed: u64, n: usize, classes: usize) -> Vec<LabeledSample> {
    let mut rng = stream_rng(seed, 5);
    (0..n)
        .map(|i| {
            let v: Vec<f64> = (0..FEATURE_LEN).map(|_| rng.random::<f64>()).collect();
            LabeledSample {
                id: format!("s{i:03}"),
                features: FeatureVector::from_slice(&v).unwrap(),
                class_id: rng.random_range(0..classes),
                source: SampleSource::File(format!("s{i:03}.pgm").into()),
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn confusion_identities(seed in any::<u64>(), n in 1usize..60, classes in 1usize..8, hidden in 1usize..6) {
        let set = random_set(seed, n, classes);
        let mut model = MlpModel::init_weights(FEATURE_LEN, hidden, classes, seed);
        for w in model.w2_mut() {
            *w *= 8.0;
        }
        let r = evaluate(&model, &set).unwrap();
        let total: u64 = r.confusion.iter().flatten().sum();
        let trace: u64 = (0..classes).map(|k| r.confusion[k][k]).sum();
        prop_assert_eq!(total as usize, r.total);
        prop_assert_eq!(r.total, n);
        prop_assert_eq!(trace as usize, r.correct);
        prop_assert_eq!(r.accuracy, r.correct as f64 / r.total as f64);
        // 1 - |mis|/total, checked in integers where it is exact
        prop_assert_eq!(r.correct + r.misclassified.len(), r.total);
        for (k, row) in r.confusion.iter().enumerate() {
            let truth = set.iter().filter(|s| s.class_id == k).count() as u64;
            prop_assert_eq!(row.iter().sum::<u64>(), truth);
        }
    }

    #[test]
    fn activations_in_open_interval(seed in any::<u64>(), n_out in 1usize..6) {
        let model = MlpModel::init_weights(FEATURE_LEN, 7, n_out, seed);
        let x: Vec<f64> = random_set(seed, 1, 1)[0].features.as_slice().to_vec();
        let a = model.forward(&x).unwrap();
        prop_assert!(a.hidden.iter().chain(&a.output).all(|&v| v > 0.0 && v < 1.0));
        let t = TrainTarget::new(0, n_out).unwrap();
        prop_assert!(sse_loss(&a.output, &t).unwrap() <= n_out as f64);
    }

    #[test]
    fn split_counts_follow_floor_rule(seed in any::<u64>(), sizes in prop::collection::vec(2usize..15, 1..6), frac in 0.05f64..0.95) {
        let mut corpus = Vec::new();
        for (class, &n) in sizes.iter().enumerate() {
            for mut s in random_set(seed ^ class as u64, n, 1) {
                s.class_id = class;
                s.id = format!("c{class}-{}", s.id);
                corpus.push(s);
            }
        }
        let spec = SplitSpec { train_fraction: frac, seed, per_class_equal: true };
        let (tr, te) = split(&corpus, &spec).unwrap();
        prop_assert_eq!(tr.len() + te.len(), corpus.len());
        let mut per: HashMap<usize, usize> = HashMap::new();
        for s in &tr {
            *per.entry(s.class_id).or_default() += 1;
        }
        for (class, &n) in sizes.iter().enumerate() {
            let want = ((n as f64 * frac + 1e-9).floor() as usize).min(n);
            prop_assert_eq!(per.get(&class).copied().unwrap_or(0), want);
        }
        let mut ids: Vec<&str> = tr.iter().chain(&te).map(|s| s.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        prop_assert_eq!(ids.len(), corpus.len());
    }
}

#[test]
fn identical_calls_give_identical_models() {
    let a = MlpModel::init_weights(5, 4, 3, 17);
    assert_eq!(a, MlpModel::init_weights(5, 4, 3, 17));
    assert_ne!(a, MlpModel::init_weights(5, 4, 3, 18));
    let t = TrainTarget::new(1, 3).unwrap();
    let (mut x, mut y) = (a.clone(), a.clone());
    for _ in 0..5 {
        x.backprop_step(&[0.1, 0.2, 0.3, 0.4, 0.5], &t, 0.8, 0.7).unwrap();
        y.backprop_step(&[0.1, 0.2, 0.3, 0.4, 0.5], &t, 0.8, 0.7).unwrap();
    }
    assert_eq!(x.to_text(&[]), y.to_text(&[]));
}

#[test]
fn training_is_deterministic_and_lowers_sse() {
    let corpus = synth_corpus(1, 0, &Perturbation::NONE).unwrap();
    let cfg = TrainConfig { epochs: 15, ..TrainConfig::default() };
    let (m1, h1) = train(&corpus, &[], &cfg).unwrap();
    let (m2, h2) = train(&corpus, &[], &cfg).unwrap();
    assert_eq!(m1.to_text(&[]), m2.to_text(&[]));
    assert_eq!(h1.to_csv(&[]), h2.to_csv(&[]));
    assert_eq!(h1.records.len(), 15);
    assert!(h1.records.last().unwrap().mean_sse < h1.records[0].mean_sse);
    assert!(h1.records.iter().all(|r| r.test_acc.is_none()));
}

#[test]
fn sweep_rows_and_choice() {
    let corpus = synth_corpus(4, 1, &Perturbation { max_shift_px: 1, flip_prob: 0.01, thickness_delta: 0 }).unwrap();
    let (tr, te) = split(&corpus, &SplitSpec { train_fraction: 0.5, ..SplitSpec::default() }).unwrap();
    let cfg = TrainConfig { epochs: 3, ..TrainConfig::default() };
    let r = sweep(&tr, &te, &[12, 4, 8], &cfg).unwrap();
    assert_eq!(r.rows.iter().map(|r| r.n_hidden).collect::<Vec<_>>(), [4, 8, 12]);
    let best = r.rows.iter().map(|r| r.test_acc).fold(f64::MIN, f64::max);
    let first_best = r.rows.iter().find(|r| r.test_acc == best).unwrap().n_hidden;
    assert_eq!(r.chosen, first_best);
    assert_eq!(SweepResult::select(&r.rows), Some(r.chosen));
    // each row is an ordinary training run seeded with base + size
    let solo = TrainConfig { n_hidden: 8, seed: 8, ..cfg };
    let (_, h) = train(&tr, &te, &solo).unwrap();
    assert_eq!(h.last().unwrap().test_acc, Some(r.rows[1].test_acc));
}
