//! `glyphrec` command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or I/O error, 3 numeric or
//! validation error.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use glyphrec::dataset::{load_corpus, load_manifest, split, synth_corpus, synth_image, LabeledSample};
use glyphrec::eval::{evaluate, export_misclassified};
use glyphrec::pgm::{read_pgm, write_binary_pgm};
use glyphrec::trainer::{sweep, train_with};
use glyphrec::{binarize, extract, MlpModel, FEATURE_LEN};

use config::{resolve_sizes, CorpusArgs, CorpusSource, FileConfig, Settings, TrainArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] glyphrec::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        use glyphrec::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::DimensionMismatch { .. }
                | E::InsufficientClassSamples(_)
                | E::EmptyTrainSet
                | E::EmptySet
                | E::InvalidConfig(_) => 3,
                E::Sample { source, .. } if matches!(**source, E::EmptyImage) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "glyphrec", version, about = "Glyph features and MLP classifier")]
struct Cli {
    /// TOML file with default settings; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the 76 features of every manifest image as CSV
    Extract {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threshold: Option<u8>,
        /// Omit the column header row
        #[arg(long)]
        no_header: bool,
    },
    /// Split a corpus, train one network, save model and history
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        train: TrainArgs,
        /// Hidden neurons [default: 60]
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        hidden: Option<u64>,
        #[arg(long)]
        model_out: PathBuf,
        #[arg(long)]
        history_out: PathBuf,
    },
    /// Train once per hidden-layer size and tabulate final accuracies
    Sweep {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        train: TrainArgs,
        /// Comma-separated hidden sizes [default: 35,40,...,75]
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
        sizes: Option<Vec<u64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy, confusion matrix and misclassified samples of a model
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Which part of the split to evaluate
        #[arg(long, value_enum, default_value_t = Subset::All)]
        subset: Subset,
        /// Directory for confusion.csv and summary.csv
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write misclassified glyphs to OUT_DIR/misclassified
        #[arg(long)]
        export_misclassified: bool,
    },
    /// Classify one PGM image
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        threshold: Option<u8>,
    },
    /// Write the synthetic corpus as PGM files plus a manifest
    SynthExport {
        #[arg(long, default_value_t = 10)]
        per_class: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_shift: Option<u32>,
        #[arg(long)]
        flip_prob: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        thickness: Option<i32>,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Subset {
    All,
    Train,
    Test,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Extract {
            manifest,
            out,
            threshold,
            no_header,
        } => cmd_extract(&manifest, &out, threshold.or(file.threshold), !no_header),
        Command::Train {
            corpus,
            train,
            hidden,
            model_out,
            history_out,
        } => {
            let s = Settings::resolve(&corpus, Some(&train), hidden.map(|h| h as usize), &file)?;
            cmd_train(&s, train.log_every, &model_out, &history_out)
        }
        Command::Sweep {
            corpus,
            train,
            sizes,
            out,
        } => {
            let s = Settings::resolve(&corpus, Some(&train), None, &file)?;
            let flag: Option<Vec<usize>> = sizes.map(|v| v.into_iter().map(|x| x as usize).collect());
            let sizes = resolve_sizes(flag.as_deref(), &file)?;
            cmd_sweep(&s, &sizes, &out)
        }
        Command::Eval {
            model,
            corpus,
            subset,
            out_dir,
            export_misclassified,
        } => {
            let s = Settings::resolve(&corpus, None, None, &file)?;
            cmd_eval(&s, &model, subset, &out_dir, export_misclassified)
        }
        Command::Predict {
            model,
            image,
            threshold,
        } => cmd_predict(
            &model,
            &image,
            threshold.or(file.threshold).unwrap_or(glyphrec::DEFAULT_THRESHOLD),
        ),
        Command::SynthExport {
            per_class,
            seed,
            max_shift,
            flip_prob,
            thickness,
            out_dir,
        } => {
            let corpus = CorpusArgs {
                manifest: None,
                synthetic: true,
                per_class: Some(per_class),
                max_shift,
                flip_prob,
                thickness,
                threshold: None,
                seed,
                train_fraction: None,
                pooled: false,
            };
            let s = Settings::resolve(&corpus, None, None, &file)?;
            cmd_synth_export(&s, &out_dir)
        }
    }
}

/// Writes `bytes` to `path`, removing any partial file on failure.
fn write_artifact(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| {
        let _ = fs::remove_file(path);
        CliError::io(path, e)
    })
}

fn comment_lines(lines: &[String]) -> String {
    lines.iter().map(|l| format!("# {l}\n")).collect()
}

fn load(settings: &Settings) -> Result<Vec<LabeledSample>, CliError> {
    Ok(match &settings.source {
        CorpusSource::Manifest(m) => load_corpus(m, settings.threshold)?,
        CorpusSource::Synthetic { per_class, perturb } => {
            synth_corpus(*per_class, settings.split.seed, perturb)?
        }
    })
}

fn cmd_extract(manifest: &Path, out: &Path, threshold: Option<u8>, header: bool) -> Result<(), CliError> {
    let threshold = threshold.unwrap_or(glyphrec::DEFAULT_THRESHOLD);
    // validate the manifest before touching any image
    load_manifest(manifest)?;
    let samples = load_corpus(manifest, threshold)?;

    let mut buf = comment_lines(&[
        format!("glyphrec {}", env!("CARGO_PKG_VERSION")),
        format!("manifest={} threshold={threshold}", manifest.display()),
    ])
    .into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        if header {
            let mut cols = vec!["id".to_string(), "label".to_string()];
            cols.extend((0..FEATURE_LEN).map(|i| format!("f{i:02}")));
            w.write_record(&cols).expect("in-memory write");
        }
        for s in &samples {
            let mut row = vec![s.id.clone(), s.class_id.to_string()];
            row.extend(s.features.as_slice().iter().map(|v| format!("{v:.15}")));
            w.write_record(&row).expect("in-memory write");
        }
        w.flush().expect("in-memory flush");
    }
    write_artifact(out, &buf)?;
    println!("extracted {} images -> {}", samples.len(), out.display());
    Ok(())
}

fn cmd_train(settings: &Settings, log_every: usize, model_out: &Path, history_out: &Path) -> Result<(), CliError> {
    let corpus = load(settings)?;
    let (trainset, testset) = split(&corpus, &settings.split)?;
    let (model, history) = train_with(&trainset, &testset, &settings.train, |r| {
        if log_every > 0 && r.epoch % log_every == 0 {
            let test = r.test_acc.map(|a| a.to_string()).unwrap_or_else(|| "-".into());
            eprintln!(
                "epoch {} sse={} train_acc={} test_acc={}",
                r.epoch, r.mean_sse, r.train_acc, test
            );
        }
    })?;

    let header = settings.describe();
    write_artifact(model_out, model.to_text(&header).as_bytes())?;
    write_artifact(history_out, history.to_csv(&header).as_bytes())?;

    let last = history.last().expect("epochs >= 1");
    let test = last.test_acc.map(|a| a.to_string()).unwrap_or_else(|| "-".into());
    println!(
        "train_samples={} test_samples={} train_acc={} test_acc={}",
        trainset.len(),
        testset.len(),
        last.train_acc,
        test
    );
    Ok(())
}

fn cmd_sweep(settings: &Settings, sizes: &[usize], out: &Path) -> Result<(), CliError> {
    let corpus = load(settings)?;
    let (trainset, testset) = split(&corpus, &settings.split)?;
    let result = sweep(&trainset, &testset, sizes, &settings.train)?;
    let mut header = settings.describe();
    header.push(format!(
        "sizes={} (hidden value above is unused; per-size seed = seed + size)",
        sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    ));
    write_artifact(out, result.to_csv(&header).as_bytes())?;
    for r in &result.rows {
        println!("hidden={} train_acc={} test_acc={}", r.n_hidden, r.train_acc, r.test_acc);
    }
    println!("chosen={}", result.chosen);
    Ok(())
}

fn cmd_eval(
    settings: &Settings,
    model_path: &Path,
    subset: Subset,
    out_dir: &Path,
    export: bool,
) -> Result<(), CliError> {
    let model = MlpModel::load(model_path)?;
    let corpus = load(settings)?;
    let set = match subset {
        Subset::All => corpus.clone(),
        Subset::Train => split(&corpus, &settings.split)?.0,
        Subset::Test => split(&corpus, &settings.split)?.1,
    };
    let report = evaluate(&model, &set)?;

    let mut header = settings.describe();
    header.push(format!("model={} subset={subset:?}", model_path.display()));
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    write_artifact(&out_dir.join("confusion.csv"), report.confusion_csv(&header).as_bytes())?;
    write_artifact(&out_dir.join("summary.csv"), report.summary_csv(&header).as_bytes())?;
    if export {
        let files = export_misclassified(&report, &corpus, &out_dir.join("misclassified"))?;
        println!("exported {} misclassified samples", files.len() - 1);
    }
    println!(
        "total={} correct={} accuracy={}",
        report.total, report.correct, report.accuracy
    );
    Ok(())
}

fn cmd_predict(model_path: &Path, image: &Path, threshold: u8) -> Result<(), CliError> {
    let model = MlpModel::load(model_path)?;
    let img = binarize(&read_pgm(image)?, threshold);
    let features = extract(&img)?;
    let act = model.forward(features.as_slice())?;
    let class = glyphrec::mlp::argmax(&act.output);
    let mut out = std::io::stdout().lock();
    let line: Vec<String> = act.output.iter().map(f64::to_string).collect();
    writeln!(out, "{class}").and_then(|_| writeln!(out, "{}", line.join(",")))
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn cmd_synth_export(settings: &Settings, out_dir: &Path) -> Result<(), CliError> {
    let CorpusSource::Synthetic { per_class, perturb } = &settings.source else {
        unreachable!("synth-export always resolves a synthetic source")
    };
    let seed = settings.split.seed;
    // validates the parameters and yields ids in manifest order
    let corpus = synth_corpus(*per_class, seed, perturb)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;

    let header = settings.describe();
    let mut manifest = csv::Writer::from_writer(comment_lines(&header[..2]).into_bytes());
    manifest.write_record(["path", "label"]).expect("in-memory write");
    for s in &corpus {
        let glyphrec::SampleSource::Synthetic { class_id, index, .. } = s.source else {
            unreachable!()
        };
        let name = format!("{}.pgm", s.id);
        let img = synth_image(class_id, index, seed, perturb);
        let note = format!("{} seed={seed}", s.id);
        write_binary_pgm(&out_dir.join(&name), &img, &[note])?;
        manifest
            .write_record([name, class_id.to_string()])
            .expect("in-memory write");
    }
    let bytes = manifest.into_inner().expect("in-memory flush");
    write_artifact(&out_dir.join("manifest.csv"), &bytes)?;
    println!("wrote {} images -> {}", corpus.len(), out_dir.display());
    Ok(())
}
