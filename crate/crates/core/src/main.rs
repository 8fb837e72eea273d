//! `eeg-affect`: run each pipeline stage from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eeg_affect::classify::{Classifier, ForestParams, ModelDocument, ModelSpec, PerceptronParams, TreeParams};
use eeg_affect::dimred::{lda_fit, pca_fit};
use eeg_affect::evaluate::{
    cross_validate, holdout_evaluate, holdout_split, kfold_indices, stratified_kfold, EvaluationDocument, Normalization,
};
use eeg_affect::ingest::{parse_raw_csv, read_feature_csv, write_feature_csv, write_raw_csv, DEFAULT_CLIP_Z};
use eeg_affect::pipeline::{featurize, FeatureSet};
use eeg_affect::plot::roc_svg;
use eeg_affect::selection::{mrmr, select_by_importance, write_selection_report, Criterion};
use eeg_affect::synth::{generate_dataset, SynthConfig};
use eeg_affect::{AffectLabel, Error, FeatureKind, FeatureMatrix, Matrix};

#[derive(Parser)]
#[command(name = "eeg-affect", version, about = "EEG band-power affective-state recognition pipeline")]
struct Cli {
    /// Master seed for generation, splitting and model training.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker threads (0 = all cores). Outputs do not depend on this.
    #[arg(long, global = true, env = "EEG_AFFECT_THREADS", default_value_t = 0)]
    threads: usize,

    /// How the min-max scaler is fitted before training.
    #[arg(long, global = true, value_enum, default_value_t = NormalizeArg::TrainFit)]
    normalize: NormalizeArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizeArg {
    TrainFit,
    Global,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic raw band-power CSV.
    Synth {
        #[arg(long, default_value_t = 100)]
        participants: u32,
        #[arg(long, default_value_t = 2.0)]
        separability: f64,
        #[arg(long, default_value_t = 0.3)]
        noise: f64,
        /// Lag-one autocorrelation of the generated series.
        #[arg(long, default_value_t = 0.6)]
        ar: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract a feature matrix from a raw CSV.
    Featurize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SetArg::Fused)]
        set: SetArg,
        /// Per-recording outlier clipping threshold in standard deviations.
        #[arg(long, default_value_t = DEFAULT_CLIP_Z)]
        clip_z: f64,
        /// Skip outlier clipping.
        #[arg(long)]
        no_clip: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Select k feature columns.
    Select {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::MrmrMid)]
        method: MethodArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        /// Ordered selection report (rank,index,name,score).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Project features with PCA or LDA.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ReduceArg::Pca)]
        method: ReduceArg,
        /// Components to keep (PCA); defaults to the count reaching 98% variance.
        #[arg(long)]
        components: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train on a holdout split, save the model and its test report.
    Train(TrainArgs),
    /// Evaluate a learner by holdout or cross-validation.
    Evaluate(TrainArgs),
    /// Render the ROC curves of an evaluation report as SVG.
    Roc {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "roc.svg")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SetArg {
    Stat,
    Advanced,
    Fused,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    MrmrMid,
    MrmrMiq,
    Gini,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceArg {
    Pca,
    Lda,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Rf,
    Tree,
    Nb,
    Perceptron,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CvArg {
    None,
    Kfold,
    Stratified,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelArg::Rf)]
    model: ModelArg,
    /// Training fraction of the holdout split.
    #[arg(long, default_value_t = 0.7)]
    split: f64,
    #[arg(long, value_enum, default_value_t = CvArg::None)]
    cv: CvArg,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    n_trees: usize,
    /// Features per split (default floor(sqrt(p))).
    #[arg(long)]
    mtry: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long, default_value_t = 2)]
    min_samples_split: usize,
    #[arg(long, default_value_t = 10_000)]
    epochs: usize,
    #[arg(long)]
    model_out: Option<PathBuf>,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Data(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_text(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn create(path: &Path) -> std::result::Result<BufWriter<fs::File>, Failure> {
    fs::File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn load_features(path: &Path) -> std::result::Result<FeatureMatrix, Failure> {
    let f = fs::File::open(path).map_err(|e| io_err(path, e))?;
    read_feature_csv(f).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn save_features(fm: &FeatureMatrix, path: &Path) -> Outcome {
    write_feature_csv(fm, create(path)?)?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let normalization = match cli.normalize {
        NormalizeArg::TrainFit => Normalization::TrainFit,
        NormalizeArg::Global => Normalization::Global,
        NormalizeArg::None => Normalization::None,
    };
    match cli.command {
        Command::Synth { participants, separability, noise, ar, out } => {
            let cfg = SynthConfig { participants, seed: cli.seed, separability, ar_coeff: ar, noise_scale: noise };
            let ds = generate_dataset(&cfg)?;
            write_raw_csv(&ds, create(&out)?)?;
            let frames: usize = ds.recordings.iter().map(|r| r.frames.len()).sum();
            println!("recordings: {}  frames: {}", ds.recordings.len(), frames);
            for l in AffectLabel::ALL {
                println!("  {:<9} {}", l.name(), ds.recordings.iter().filter(|r| r.label == l).count());
            }
        }
        Command::Featurize { input, set, clip_z, no_clip, out } => {
            let f = fs::File::open(&input).map_err(|e| io_err(&input, e))?;
            let ds = parse_raw_csv(f).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
            let set = match set {
                SetArg::Stat => FeatureSet::Stat,
                SetArg::Advanced => FeatureSet::Advanced,
                SetArg::Fused => FeatureSet::Fused,
            };
            let fm = featurize(&ds, set, (!no_clip).then_some(clip_z))?;
            save_features(&fm, &out)?;
            println!("{} rows × {} features ({:?})", fm.nrows(), fm.ncols(), fm.kind);
        }
        Command::Select { input, method, k, out, report } => {
            let fm = load_features(&input)?;
            let sel = match method {
                MethodArg::MrmrMid => mrmr(&fm, k, Criterion::Mid)?,
                MethodArg::MrmrMiq => mrmr(&fm, k, Criterion::Miq)?,
                MethodArg::Gini => {
                    let params = ForestParams { master_seed: cli.seed, ..ForestParams::default() };
                    select_by_importance(&fm, k, &params)?
                }
            };
            save_features(&fm.select_columns(&sel.chosen)?, &out)?;
            if let Some(path) = report {
                write_selection_report(&sel, &fm.column_names, create(&path)?)?;
            }
            println!("selected {} of {} features", sel.chosen.len(), fm.ncols());
        }
        Command::Reduce { input, method, components, out } => {
            let fm = load_features(&input)?;
            let scaled = match normalization {
                Normalization::None => fm.values.clone(),
                _ => eeg_affect::ingest::MinMaxScaler::fit(&fm.values)?.apply(&fm.values)?,
            };
            let (values, prefix): (Matrix, &str) = match method {
                ReduceArg::Pca => {
                    let pca = pca_fit(&scaled)?;
                    let r98 = pca.components_for(0.98);
                    println!("components: {}  reaching 98% variance: {}", pca.n_components(), r98);
                    let r = components.unwrap_or(r98);
                    println!("explained variance with {r}: {:.6}", pca.explained_variance(r)?);
                    (pca.transform(&scaled, r)?, "pc")
                }
                ReduceArg::Lda => {
                    let lda = lda_fit(&scaled, &fm.labels)?;
                    println!("discriminant directions: {}", lda.n_directions());
                    (lda.transform(&scaled)?, "ld")
                }
            };
            let names = (1..=values.ncols()).map(|i| format!("{prefix}:{i}")).collect();
            let reduced = FeatureMatrix::new(values, names, fm.participant_ids.clone(), fm.labels.clone(), FeatureKind::Derived)?;
            save_features(&reduced, &out)?;
        }
        Command::Train(args) => train_or_evaluate(args, cli.seed, normalization, true)?,
        Command::Evaluate(args) => train_or_evaluate(args, cli.seed, normalization, false)?,
        Command::Roc { report, out } => {
            let doc = EvaluationDocument::from_json(&read_text(&report)?)
                .map_err(|e| Failure::Data(format!("{}: {e}", report.display())))?;
            let svg = roc_svg(&doc.report).map_err(|e| Failure::Data(format!("{}: {e}", report.display())))?;
            write_text(&out, &svg)?;
            println!("wrote {} curves to {}", doc.report.roc.len(), out.display());
        }
    }
    Ok(())
}

fn model_spec(args: &TrainArgs, seed: u64) -> ModelSpec {
    match args.model {
        ModelArg::Rf => ModelSpec::Forest(ForestParams {
            n_trees: args.n_trees,
            mtry: args.mtry,
            max_depth: args.max_depth,
            min_samples_split: args.min_samples_split,
            master_seed: seed,
        }),
        ModelArg::Tree => ModelSpec::Tree(TreeParams {
            max_depth: args.max_depth,
            min_samples_split: args.min_samples_split,
            mtry: args.mtry,
            seed,
        }),
        ModelArg::Nb => ModelSpec::Nb,
        ModelArg::Perceptron => ModelSpec::Perceptron(PerceptronParams { epochs: args.epochs, lr: 1.0, master_seed: seed }),
    }
}

fn train_or_evaluate(args: TrainArgs, seed: u64, norm: Normalization, always_holdout: bool) -> Outcome {
    let fm = load_features(&args.features)?;
    let spec = model_spec(&args, seed);
    let doc = if always_holdout || args.cv == CvArg::None {
        let (train, test) = holdout_split(&fm.labels, args.split, seed, true)?;
        let outcome = holdout_evaluate(&spec, &fm, &train, &test, norm)?;
        if let Some(path) = &args.model_out {
            let saved = ModelDocument::new(outcome.model.clone(), fm.column_names.clone(), outcome.scaler.clone());
            write_text(path, &saved.to_json()?)?;
        }
        debug_assert_eq!(outcome.model.n_features(), fm.ncols());
        EvaluationDocument {
            model: spec.name().into(),
            protocol: format!("stratified holdout {:.0}/{:.0}", 100.0 * args.split, 100.0 * (1.0 - args.split)),
            n_features: fm.ncols(),
            train_accuracy: outcome.train_accuracy,
            report: outcome.report,
            folds: Vec::new(),
        }
    } else {
        if args.model_out.is_some() {
            return Err(Failure::Usage("--model-out needs a holdout run (--cv none)".into()));
        }
        let (folds, name) = match args.cv {
            CvArg::Kfold => (kfold_indices(fm.nrows(), args.k, seed)?, "k-fold"),
            _ => (stratified_kfold(&fm.labels, args.k, seed)?, "stratified k-fold"),
        };
        let cv = cross_validate(&spec, &fm, &folds, norm)?;
        EvaluationDocument {
            model: spec.name().into(),
            protocol: format!("{name}, k = {}", args.k),
            n_features: fm.ncols(),
            train_accuracy: cv.train_accuracy,
            report: cv.pooled,
            folds: cv.folds,
        }
    };
    print!("{}", doc.to_table());
    if let Some(path) = &args.report_out {
        write_text(path, &doc.to_json()?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
