use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{LabeledSample, SampleSource, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::features::extract;
use crate::image::binarize;
use crate::pgm::read_pgm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path exactly as written in the manifest.
    pub raw_path: String,
    /// `raw_path` resolved against the manifest's directory.
    pub path: PathBuf,
    pub class_id: usize,
    /// 1-based line number in the manifest.
    pub line: u64,
}

/// Reads a `path,label` CSV. Relative image paths resolve against the
/// manifest's own directory; lines starting with `#` are ignored.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    // drop comment lines but remember where the survivors came from
    let mut physical = Vec::new();
    let mut kept = String::with_capacity(text.len());
    for (i, line) in text.lines().enumerate() {
        if !line.trim_start().starts_with('#') {
            physical.push(i as u64 + 1);
            kept.push_str(line);
            kept.push('\n');
        }
    }
    let line_of = |logical: u64| {
        physical
            .get(logical.saturating_sub(1) as usize)
            .copied()
            .unwrap_or(logical)
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(kept.as_bytes());

    let malformed = |line: u64, msg: String| Error::MalformedRow {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let headers = reader
        .headers()
        .map_err(|e| csv_error(path, e, &line_of))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["path", "label"] {
        return Err(malformed(line_of(1), "header must be `path,label`".into()));
    }

    let base = path.parent().unwrap_or(Path::new(""));
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e, &line_of))?;
        let line = line_of(record.position().map_or(0, |p| p.line()));
        if record.len() != 2 {
            return Err(malformed(line, format!("expected 2 fields, got {}", record.len())));
        }
        let raw_path = record[0].to_string();
        if raw_path.is_empty() {
            return Err(malformed(line, "empty path".into()));
        }
        let label: i64 = record[1]
            .parse()
            .map_err(|_| malformed(line, format!("bad label `{}`", &record[1])))?;
        if label < 0 || label >= NUM_CLASSES as i64 {
            return Err(Error::LabelOutOfRange {
                path: path.to_path_buf(),
                line,
                label,
                classes: NUM_CLASSES,
            });
        }
        entries.push(ManifestEntry {
            path: base.join(&raw_path),
            raw_path,
            class_id: label as usize,
            line,
        });
    }
    Ok(entries)
}

fn csv_error(path: &Path, e: csv::Error, line_of: &dyn Fn(u64) -> u64) -> Error {
    let line = line_of(e.position().map_or(0, |p| p.line()));
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::MalformedRow {
            path: path.to_path_buf(),
            line,
            msg: format!("{other:?}"),
        },
    }
}

/// Loads, binarises and featurises every manifest entry. Output order is
/// manifest order; sample ids are the paths as written.
pub fn load_corpus(manifest: &Path, threshold: u8) -> Result<Vec<LabeledSample>> {
    let entries = load_manifest(manifest)?;
    entries
        .par_iter()
        .map(|e| {
            let features = read_pgm(&e.path)
                .and_then(|g| extract(&binarize(&g, threshold)))
                .map_err(|source| Error::Sample {
                    manifest: manifest.to_path_buf(),
                    line: e.line,
                    source: Box::new(source),
                })?;
            Ok(LabeledSample {
                id: e.raw_path.clone(),
                features,
                class_id: e.class_id,
                source: SampleSource::File(e.path.clone()),
            })
        })
        .collect()
}
