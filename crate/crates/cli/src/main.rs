//! Batch command-line front end: every subcommand reads a pipeline config,
//! runs one stage or experiment, and writes delimited artifacts to the
//! output directory. Progress goes to standard error, data to files.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use vibradiag::eval::{
    default_ratio_grid, default_threshold_grid, robustness_experiment, robustness_table,
    sweep_table, threshold_sweep,
};
use vibradiag::pipeline::{comparison_table, selection_summary, DataSource};
use vibradiag::selection::SelectionMethod;
use vibradiag::{synth_dataset, Error, PipelineConfig, Result};

const FETCH_INSTRUCTIONS: &str = "\
The reference bearing dataset is not bundled (licensing); fetch it yourself:

  University of Ottawa rolling-element bearing vibration dataset
  Mendeley Data, doi:10.17632/v43hmbwxpm.1
  https://data.mendeley.com/datasets/v43hmbwxpm/1
  Accelerometer channel sampled at 200 kHz.

Convert the .mat records to one-column CSV (one sample per line) and lay
them out as:

  <root>/healthy/*.csv   label 1
  <root>/inner/*.csv     label 2  (inner-race fault)
  <root>/outer/*.csv     label 3  (outer-race fault)

Then either point a [data.files] config section at those paths, or set
VIBRADIAG_OTTAWA_DIR=<root> and run the ignored acceptance check:

  cargo test -p vibradiag --test acceptance -- --ignored
";

#[derive(Parser)]
#[command(
    name = "vibradiag",
    version,
    about = "Vibration feature engineering and fault classification experiments"
)]
struct Cli {
    /// Print how to obtain and lay out the reference bearing dataset.
    #[arg(long)]
    fetch_instructions: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct Common {
    /// Pipeline configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for artifacts; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Print progress to standard error.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic signal files plus a label manifest.
    Synth(Common),
    /// Extract the fused feature matrix (features.csv).
    Extract(Common),
    /// Score features on the full data and write the weight table.
    Select(Common),
    /// Fit the configured method on the full data and save the model.
    Train(Common),
    /// Cross-validate the configured method and write the run report.
    Evaluate(Common),
    /// Cross-validate over the default threshold grid (sweep.csv).
    SweepThreshold(Common),
    /// Measure representation robustness under cell-level noise.
    Robustness {
        #[command(flatten)]
        common: Common,
        /// Noise trials per ratio.
        #[arg(long, default_value_t = 30)]
        trials: usize,
    },
    /// Cross-validate every selection method side by side.
    Compare(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    if cli.fetch_instructions {
        print!("{FETCH_INSTRUCTIONS}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required; run `vibradiag --help` for usage");
        return ExitCode::from(1);
    };
    match dispatch(command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2))
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Synth(c) => synth_cmd(&c),
        Command::Extract(c) => extract_cmd(&c),
        Command::Select(c) => select_cmd(&c),
        Command::Train(c) => train_cmd(&c),
        Command::Evaluate(c) => evaluate_cmd(&c),
        Command::SweepThreshold(c) => sweep_cmd(&c),
        Command::Robustness { common, trials } => robustness_cmd(&common, trials),
        Command::Compare(c) => compare_cmd(&c),
    }
}

/// Load the config, apply the seed override and prepare the output directory.
fn setup(common: &Common) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    std::fs::create_dir_all(&common.out).map_err(|source| Error::Io {
        path: common.out.display().to_string(),
        source,
    })?;
    Ok(cfg)
}

fn write_artifact(common: &Common, name: &str, contents: &str) -> Result<()> {
    let path = common.out.join(name);
    std::fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    if common.verbose {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn synth_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let DataSource::Synth(spec) = &cfg.data else {
        return Err(Error::Config(
            "synth needs a [data.synth] source in the config".into(),
        ));
    };
    let windows = synth_dataset(spec, cfg.seed)?;
    // Windows of one class are contiguous cuts of one record; reassemble
    // them in source order so each class becomes one signal file.
    let mut per_class: BTreeMap<u32, Vec<&vibradiag::SignalWindow>> = BTreeMap::new();
    for w in &windows {
        per_class.entry(w.label.expect("labeled window")).or_default().push(w);
    }
    let mut manifest = String::from("path,label,sample_rate\n");
    for (label, mut class_windows) in per_class {
        class_windows.sort_by_key(|w| w.source_offset);
        let mut body = String::new();
        for w in &class_windows {
            for s in &w.samples {
                let _ = writeln!(body, "{s}");
            }
        }
        let name = format!("class_{label}.csv");
        write_artifact(common, &name, &body)?;
        let _ = writeln!(manifest, "{name},{label},{}", spec.sample_rate);
    }
    write_artifact(common, "manifest.csv", &manifest)
}

fn extract_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let m = vibradiag::extract_features(&cfg)?;
    if common.verbose {
        eprintln!("extracted {} windows x {} features", m.n_rows(), m.n_cols());
    }
    write_artifact(common, "features.csv", &m.to_delimited())
}

fn select_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let m = vibradiag::extract_features(&cfg)?;
    let (table, names) = selection_summary(&m, &cfg)?;
    if common.verbose {
        eprintln!("{} of {} features selected", names.len(), m.n_cols());
    }
    write_artifact(common, "weights.csv", &table)?;
    let mut selected = String::new();
    for name in &names {
        let _ = writeln!(selected, "{name}");
    }
    write_artifact(common, "selected.txt", &selected)
}

fn train_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let model = vibradiag::train(&cfg)?;
    if common.verbose {
        eprintln!(
            "model: {} features, k = {}, {} training rows",
            model.feature_names().len(),
            model.k(),
            model.n_train()
        );
    }
    write_artifact(common, "model.txt", &model.to_text())
}

fn evaluate_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let report = vibradiag::run(&cfg)?;
    if common.verbose {
        eprintln!(
            "mean accuracy {:.4} (std {:.4}) in {:.2?}",
            report.mean_accuracy, report.std_accuracy, report.wall_clock
        );
    }
    write_artifact(common, "report.txt", &report.to_text())?;
    write_artifact(common, "confusion.csv", &report.confusion.to_table())?;
    write_artifact(common, "auc.csv", &report.auc.to_table())?;
    let mut folds = String::from("fold,accuracy,selected\n");
    for (i, (a, s)) in report
        .fold_accuracies
        .iter()
        .zip(&report.selected_counts)
        .enumerate()
    {
        let _ = writeln!(folds, "{i},{a},{s}");
    }
    write_artifact(common, "folds.csv", &folds)
}

fn sweep_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let m = vibradiag::extract_features(&cfg)?;
    let rows = threshold_sweep(&m, &default_threshold_grid(), &cfg.cv_config())?;
    if common.verbose {
        eprintln!("{} thresholds swept", rows.len());
    }
    write_artifact(common, "sweep.csv", &sweep_table(&rows))
}

fn robustness_cmd(common: &Common, trials: usize) -> Result<()> {
    let cfg = setup(common)?;
    let m = vibradiag::extract_features(&cfg)?;
    let methods = [
        SelectionMethod::Pide,
        SelectionMethod::Cide,
        SelectionMethod::Pca,
        SelectionMethod::Lda,
    ];
    let rows = robustness_experiment(&m, &methods, &default_ratio_grid(), trials, &cfg.cv_config())?;
    if common.verbose {
        eprintln!("{} method x ratio rows, {trials} trials each", rows.len());
    }
    write_artifact(common, "robustness.csv", &robustness_table(&rows))
}

fn compare_cmd(common: &Common) -> Result<()> {
    let cfg = setup(common)?;
    let methods = [
        SelectionMethod::Pide,
        SelectionMethod::Cide,
        SelectionMethod::Pca,
        SelectionMethod::Lda,
        SelectionMethod::None,
    ];
    let rows = vibradiag::compare_methods(&cfg, &methods)?;
    if common.verbose {
        for r in &rows {
            eprintln!(
                "{}: accuracy {:.4} with {} features",
                r.method, r.mean_accuracy, r.selected
            );
        }
    }
    write_artifact(common, "comparison.csv", &comparison_table(&rows))
}
