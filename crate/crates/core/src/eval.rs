//! Top-1 accuracy, confusion matrix and export of misclassified glyphs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dataset::{synth_image, LabeledSample, SampleSource};
use crate::error::{Error, Result};
use crate::mlp::MlpModel;
use crate::pgm::write_binary_pgm;
use crate::trainer::comment_block;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Misclassified {
    pub id: String,
    pub true_class: usize,
    pub predicted: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// `confusion[true][predicted]`, square over the model's classes.
    pub confusion: Vec<Vec<u64>>,
    /// Sorted by sample id.
    pub misclassified: Vec<Misclassified>,
}

impl EvalReport {
    /// One row per true class, comma-separated counts per predicted class.
    pub fn confusion_csv(&self, comments: &[String]) -> String {
        let mut out = comment_block(comments);
        for row in &self.confusion {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn summary_csv(&self, comments: &[String]) -> String {
        let mut out = comment_block(comments);
        out.push_str("total,correct,accuracy\n");
        writeln!(out, "{},{},{}", self.total, self.correct, self.accuracy).unwrap();
        out
    }
}

pub fn evaluate(model: &MlpModel, set: &[LabeledSample]) -> Result<EvalReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = model.n_out();
    let mut confusion = vec![vec![0u64; n]; n];
    let mut misclassified = Vec::new();
    let mut correct = 0;
    for s in set {
        if s.class_id >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.class_id + 1,
            });
        }
        let predicted = model.predict(s.features.as_slice())?;
        confusion[s.class_id][predicted] += 1;
        if predicted == s.class_id {
            correct += 1;
        } else {
            misclassified.push(Misclassified {
                id: s.id.clone(),
                true_class: s.class_id,
                predicted,
            });
        }
    }
    misclassified.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(EvalReport {
        total: set.len(),
        correct,
        accuracy: correct as f64 / set.len() as f64,
        confusion,
        misclassified,
    })
}

fn file_stem(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

/// Writes `NNNN_<id>.pgm` for every misclassified sample and an index
/// `misclassified.csv` (`id,true,predicted`) into `out_dir`. File-backed
/// samples are copied verbatim; synthetic ones are regenerated from their
/// recorded generator parameters. Returns the written paths, index last.
pub fn export_misclassified(
    report: &EvalReport,
    corpus: &[LabeledSample],
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let by_id: HashMap<&str, &LabeledSample> = corpus.iter().map(|s| (s.id.as_str(), s)).collect();

    let mut written = Vec::new();
    let mut index = csv::Writer::from_writer(Vec::new());
    index
        .write_record(["id", "true", "predicted"])
        .expect("in-memory write");
    for (n, m) in report.misclassified.iter().enumerate() {
        let sample = by_id
            .get(m.id.as_str())
            .ok_or_else(|| Error::MissingSource(m.id.clone()))?;
        let dest = out_dir.join(format!("{n:04}_{}.pgm", file_stem(&m.id)));
        match &sample.source {
            SampleSource::File(src) => {
                fs::copy(src, &dest).map_err(|_| Error::MissingSource(m.id.clone()))?;
            }
            SampleSource::Synthetic {
                seed,
                class_id,
                index,
                perturb,
            } => {
                let img = synth_image(*class_id, *index, *seed, perturb);
                let note = format!("{} true={} predicted={}", m.id, m.true_class, m.predicted);
                write_binary_pgm(&dest, &img, &[note])?;
            }
        }
        written.push(dest);
        index
            .write_record([m.id.clone(), m.true_class.to_string(), m.predicted.to_string()])
            .expect("in-memory write");
    }
    let index_path = out_dir.join("misclassified.csv");
    let bytes = index.into_inner().expect("in-memory flush");
    fs::write(&index_path, bytes).map_err(|e| Error::io(&index_path, e))?;
    written.push(index_path);
    Ok(written)
}
