//! Command-line front end: each pipeline stage as a standalone subcommand
//! plus a `pipeline` subcommand that runs them all.
//!
//! Exit codes: 0 success, 1 bad usage (flag parsing or invalid argument
//! values), 2 data problems (unreadable or malformed input, mismatched
//! shapes), 3 a pipeline stage failure.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use roughsel::classifier::{
    self, NetworkConfig, UpdateMode, DEFAULT_WEIGHT_SCALE,
};
use roughsel::clustering::{self, DEFAULT_MAX_ITER, DEFAULT_TOL};
use roughsel::evaluation::{confusion, map_clusters_to_classes, metrics_tables, MetricsRow};
use roughsel::pipeline::{
    generate_synthetic, read_json, rescaled_inputs, run_pipeline, write_json,
    write_matrix_csv, ClassifierEvaluation, ClusterAlgorithm, ClusterEvaluation,
    ExhaustiveReport, NetworkArtifact, PipelineConfig, ReductMethod, SyntheticSpec,
};
use roughsel::roughset::{self, DEFAULT_EXHAUSTIVE_CAP};
use roughsel::seeding;
use roughsel::table::{
    discretize, fit_discretizer, load_csv, ClassColumn, CsvFormat, DecisionTable, RawMatrix,
    DEFAULT_BINS,
};
use roughsel::{Error, Result};

#[derive(Parser)]
#[command(
    name = "roughsel",
    version,
    about = "Rough-set attribute reduction with clustering and neural classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic expression CSV with known signal genes
    Synth(SynthArgs),
    /// Fit per-column discretizers and emit the coded decision table
    Discretize(DiscretizeArgs),
    /// Select an attribute subset that preserves the dependency degree
    Reduct(ReductArgs),
    /// Cluster the samples and score the clusters against the labels
    Cluster(ClusterArgs),
    /// Train the network classifier and score a held-out split
    Classify(ClassifyArgs),
    /// Compare a predicted-label file against a true-label file
    Evaluate(EvaluateArgs),
    /// Run every stage and write all artifacts into a directory
    Pipeline(PipelineArgs),
}

fn parse_class_column(s: &str) -> std::result::Result<ClassColumn, String> {
    if s.eq_ignore_ascii_case("last") {
        return Ok(ClassColumn::Last);
    }
    if let Ok(index) = s.parse::<usize>() {
        return Ok(ClassColumn::Index(index));
    }
    Ok(ClassColumn::Name(s.to_string()))
}

fn parse_delimiter(s: &str) -> std::result::Result<u8, String> {
    if s == "\\t" || s.eq_ignore_ascii_case("tab") {
        return Ok(b'\t');
    }
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if c.is_ascii() => Ok(c as u8),
        _ => Err(format!(
            "delimiter must be one ASCII character (or \"tab\"), got {s:?}"
        )),
    }
}

/// Flags shared by every subcommand that reads a labeled CSV.
#[derive(Args)]
struct CsvArgs {
    /// Input file
    #[arg(long, short = 'i')]
    input: PathBuf,
    /// Class column: "last", a 0-based index, or a header name
    #[arg(long, default_value = "last", value_parser = parse_class_column)]
    class_column: ClassColumn,
    /// Field delimiter: one ASCII character, or "tab"
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: u8,
    /// Treat the first row as data rather than a header
    #[arg(long)]
    no_header: bool,
}

impl CsvArgs {
    fn format(&self) -> CsvFormat {
        CsvFormat {
            delimiter: self.delimiter,
            has_header: !self.no_header,
        }
    }

    fn load(&self) -> Result<RawMatrix> {
        load_csv(&self.input, self.format(), &self.class_column)
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 60)]
    samples: usize,
    /// Class-dependent genes, placed first in the column order
    #[arg(long, default_value_t = 2)]
    informative: usize,
    /// Class-independent uniform-noise genes
    #[arg(long, default_value_t = 8)]
    noise: usize,
    #[arg(long, default_value_t = 2)]
    classes: usize,
    /// Distance between adjacent class means, in standard deviations
    #[arg(long, default_value_t = 4.0)]
    separation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the CSV
    #[arg(long, short = 'o')]
    out: PathBuf,
    /// Also write a JSON sidecar naming the informative genes
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct DiscretizeArgs {
    #[command(flatten)]
    csv: CsvArgs,
    /// Bins per attribute
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Master seed; the stage seed derives from it as in `pipeline`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the coded decision table here (JSON)
    #[arg(long)]
    out_table: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Quick,
    Exhaustive,
}

impl From<MethodArg> for ReductMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Quick => ReductMethod::Quick,
            MethodArg::Exhaustive => ReductMethod::Exhaustive,
        }
    }
}

#[derive(Args)]
struct ReductArgs {
    /// Decision table (.json) or integer-coded CSV; CSV flags below apply
    /// only to CSV input
    #[command(flatten)]
    csv: CsvArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Quick)]
    method: MethodArg,
    /// Attribute-count cap for exhaustive enumeration
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    cap: usize,
    /// Also write the printed JSON here
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Kmeans,
    Fcm,
}

impl From<AlgoArg> for ClusterAlgorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Kmeans => ClusterAlgorithm::KMeans,
            AlgoArg::Fcm => ClusterAlgorithm::Fcm,
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    csv: CsvArgs,
    #[arg(long, value_enum, default_value_t = AlgoArg::Kmeans)]
    algo: AlgoArg,
    /// Cluster count; defaults to the number of classes
    #[arg(long)]
    k: Option<usize>,
    /// Fuzziness exponent for FCM, in [1.05, 10]
    #[arg(long, default_value_t = 2.0)]
    fcm_m: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Master seed; the stage seed derives from it as in `pipeline`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated column indices to cluster on (default: all)
    #[arg(long, value_delimiter = ',')]
    attrs: Option<Vec<usize>>,
    /// Class treated as positive in the confusion report
    #[arg(long, default_value_t = 0)]
    positive_class: usize,
    /// Write the fitted model JSON here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    csv: CsvArgs,
    /// Bins per attribute for the discretized inputs
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Comma-separated column indices to train on (default: all)
    #[arg(long, value_delimiter = ',')]
    attrs: Option<Vec<usize>>,
    /// Comma-separated hidden-layer widths (default: one layer of 2d+1)
    #[arg(long, value_delimiter = ',')]
    hidden: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0.5)]
    learning_rate: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    /// Fraction of samples in the training split
    #[arg(long, default_value_t = 0.7)]
    train_fraction: f64,
    #[arg(long, default_value_t = 0)]
    positive_class: usize,
    /// Master seed; stage seeds derive from it as in `pipeline`
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the trained model JSON here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

#[derive(Args)]
struct EvaluateArgs {
    /// File with one predicted integer label per line
    #[arg(long)]
    predicted: PathBuf,
    /// File with one true integer label per line
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, default_value_t = 0)]
    positive_class: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Dataset label used in table output
    #[arg(long, default_value = "data")]
    dataset: String,
    /// Method label used in table output
    #[arg(long, default_value = "eval")]
    method: String,
}

#[derive(Args)]
struct PipelineArgs {
    /// JSON configuration file; the flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
    /// Directory the artifacts and manifest are written into
    #[arg(long, short = 'o')]
    out: PathBuf,
    #[arg(long)]
    dataset_name: Option<String>,
    #[arg(long, value_parser = parse_class_column)]
    class_column: Option<ClassColumn>,
    #[arg(long, value_parser = parse_delimiter)]
    delimiter: Option<u8>,
    /// Treat the first row as data rather than a header
    #[arg(long)]
    no_header: bool,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Comma-separated subset of kmeans,fcm
    #[arg(long = "cluster", value_delimiter = ',')]
    clusterers: Option<Vec<AlgoArg>>,
    #[arg(long)]
    fcm_m: Option<f64>,
    /// Comma-separated hidden-layer widths
    #[arg(long, value_delimiter = ',')]
    hidden: Option<Vec<usize>>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    train_fraction: Option<f64>,
    #[arg(long)]
    positive_class: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        let mut last = err.to_string();
        eprintln!("error: {last}");
        let mut source = std::error::Error::source(&err);
        while let Some(cause) = source {
            let text = cause.to_string();
            // Variants embed their cause in the message; only print causes
            // that add something.
            if !last.contains(&text) {
                eprintln!("  caused by: {text}");
            }
            last = text;
            source = cause.source();
        }
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) => 1,
        Error::Stage { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(args) => cmd_synth(args),
        Command::Discretize(args) => cmd_discretize(args),
        Command::Reduct(args) => cmd_reduct(args),
        Command::Cluster(args) => cmd_cluster(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| Error::Serde {
        context: "rendering output".to_string(),
        source,
    })?;
    println!("{text}");
    Ok(())
}

fn maybe_write<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    if let Some(path) = out {
        write_json(value, path)?;
    }
    Ok(())
}

fn attr_subset(attrs: &Option<Vec<usize>>, n_attributes: usize) -> BTreeSet<usize> {
    match attrs {
        Some(list) => list.iter().copied().collect(),
        None => (0..n_attributes).collect(),
    }
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let spec = SyntheticSpec {
        samples: args.samples,
        informative: args.informative,
        noise: args.noise,
        classes: args.classes,
        separation: args.separation,
        seed: args.seed,
    };
    let data = generate_synthetic(&spec)?;
    write_matrix_csv(&data.matrix, "class", &args.out)?;
    if let Some(truth) = &args.truth {
        write_json(
            &json!({
                "spec": data.spec,
                "informative_genes": data.informative_genes,
            }),
            truth,
        )?;
    }
    println!(
        "wrote {} samples x {} genes ({} informative) to {}",
        data.matrix.n_samples(),
        data.matrix.n_attributes(),
        spec.informative,
        args.out.display()
    );
    Ok(())
}

fn cmd_discretize(args: DiscretizeArgs) -> Result<()> {
    let matrix = args.csv.load()?;
    let disc = fit_discretizer(&matrix, args.bins, seeding::stage_seed(args.seed, "discretize"))?;
    let table = discretize(&matrix, &disc)?;
    maybe_write(&table, &args.out_table)?;
    print_json(&disc.report(&matrix.attribute_names))
}

fn load_table(csv: &CsvArgs) -> Result<DecisionTable> {
    let is_json = csv
        .input
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("json"));
    if is_json {
        read_json(&csv.input)
    } else {
        let matrix = csv.load()?;
        DecisionTable::from_integer_matrix(&matrix)
    }
}

fn cmd_reduct(args: ReductArgs) -> Result<()> {
    let table = load_table(&args.csv)?;
    match args.method {
        MethodArg::Quick => {
            let report = roughset::quick_reduct(&table)?.report(&table);
            maybe_write(&report, &args.out)?;
            print_json(&report)
        }
        MethodArg::Exhaustive => {
            let found = roughset::exhaustive_reducts(&table, args.cap)?;
            let inventory = ExhaustiveReport::from_search(&found, &table)?;
            maybe_write(&inventory, &args.out)?;
            print_json(&inventory)
        }
    }
}

fn cmd_cluster(args: ClusterArgs) -> Result<()> {
    if !(1.05..=10.0).contains(&args.fcm_m) {
        return Err(Error::invalid(format!(
            "fcm fuzziness must lie in [1.05, 10], got {}",
            args.fcm_m
        )));
    }
    let matrix = args.csv.load()?;
    let columns = attr_subset(&args.attrs, matrix.n_attributes());
    let reduced = matrix.select_columns(&columns)?;
    let k = args.k.unwrap_or_else(|| matrix.n_classes());

    let assignments = match args.algo {
        AlgoArg::Kmeans => {
            let model = clustering::kmeans(
                &reduced.values,
                k,
                seeding::stage_seed(args.seed, "kmeans"),
                args.max_iter,
                args.tol,
            )?;
            let assignments = model.assignments.clone();
            maybe_write(&model, &args.out)?;
            assignments
        }
        AlgoArg::Fcm => {
            let model = clustering::fcm(
                &reduced.values,
                k,
                args.fcm_m,
                seeding::stage_seed(args.seed, "fcm"),
                args.max_iter,
                args.tol,
            )?;
            let assignments = model.hard_assignments();
            maybe_write(&model, &args.out)?;
            assignments
        }
    };

    let mapping = map_clusters_to_classes(&assignments, &matrix.class_labels)?;
    let mapped = mapping.apply(&assignments)?;
    let report = confusion(&mapped, &matrix.class_labels, args.positive_class)?;
    print_json(&ClusterEvaluation {
        mapping,
        confusion: report,
    })
}

fn cmd_classify(args: ClassifyArgs) -> Result<()> {
    let matrix = args.csv.load()?;
    let disc = fit_discretizer(&matrix, args.bins, seeding::stage_seed(args.seed, "discretize"))?;
    let table = discretize(&matrix, &disc)?;
    let columns = attr_subset(&args.attrs, table.n_attributes());
    let projected = table.project(&columns)?;

    let inputs = rescaled_inputs(&projected);
    let labels = projected.decision_codes();
    let (train_idx, test_idx) = classifier::stratified_split(
        labels,
        args.train_fraction,
        seeding::stage_seed(args.seed, "split"),
    )?;
    if test_idx.is_empty() {
        return Err(Error::invalid(
            "the held-out test split is empty; every class has a single sample".to_string(),
        ));
    }
    let gather = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<usize>) {
        (
            idx.iter().map(|&i| inputs[i].clone()).collect(),
            idx.iter().map(|&i| labels[i]).collect(),
        )
    };
    let (train_inputs, train_labels) = gather(&train_idx);
    let (test_inputs, test_labels) = gather(&test_idx);

    let config = NetworkConfig {
        input_dim: projected.n_attributes(),
        hidden_sizes: args
            .hidden
            .clone()
            .unwrap_or_else(|| vec![(2 * projected.n_attributes() + 1).max(2)]),
        output_dim: matrix.n_classes(),
        learning_rate: args.learning_rate,
        epochs: args.epochs,
        seed: seeding::stage_seed(args.seed, "bpn"),
        weight_init_scale: DEFAULT_WEIGHT_SCALE,
        update_mode: UpdateMode::Stochastic,
    };
    let mut net = classifier::init_network(&config)?;
    let train_report = classifier::train(&mut net, &train_inputs, &train_labels, &config)?;
    let predictions = classifier::predict_batch(&net, &test_inputs)?;
    let report = confusion(&predictions, &test_labels, args.positive_class)?;

    maybe_write(
        &NetworkArtifact {
            config,
            network: net,
        },
        &args.out,
    )?;
    print_json(&ClassifierEvaluation {
        train_samples: train_idx.len(),
        test_samples: test_idx.len(),
        final_train_accuracy: train_report.final_train_accuracy,
        test_confusion: report,
    })
}

fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut labels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let label = trimmed.parse::<usize>().map_err(|_| Error::BadCell {
            row: i + 1,
            column: 1,
            value: trimmed.to_string(),
        })?;
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::NoRows);
    }
    Ok(labels)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let predicted = read_labels(&args.predicted)?;
    let truth = read_labels(&args.truth)?;
    let report = confusion(&predicted, &truth, args.positive_class)?;
    match args.format {
        FormatArg::Json => print_json(&report),
        FormatArg::Table => {
            let row = MetricsRow {
                dataset: args.dataset,
                method: args.method,
                report,
            };
            println!("{}", metrics_tables(&[row]));
            Ok(())
        }
    }
}

fn cmd_pipeline(args: PipelineArgs) -> Result<()> {
    let mut config = match (&args.config, &args.input) {
        (Some(path), _) => read_json::<PipelineConfig>(path)?,
        (None, Some(input)) => PipelineConfig::new(input),
        (None, None) => {
            return Err(Error::invalid(
                "pass --input or --config to say what to process".to_string(),
            ))
        }
    };
    if let Some(input) = args.input {
        config.input = input;
    }
    if let Some(name) = args.dataset_name {
        config.dataset_name = Some(name);
    }
    if let Some(cc) = args.class_column {
        config.class_column = cc;
    }
    if let Some(d) = args.delimiter {
        config.delimiter = d as char;
    }
    if args.no_header {
        config.has_header = false;
    }
    if let Some(bins) = args.bins {
        config.bins = bins;
    }
    if let Some(method) = args.method {
        config.reduct_method = method.into();
    }
    if let Some(clusterers) = args.clusterers {
        config.clusterers = clusterers.into_iter().map(Into::into).collect();
    }
    if let Some(m) = args.fcm_m {
        config.fcm_m = m;
    }
    if let Some(hidden) = args.hidden {
        config.hidden_sizes = Some(hidden);
    }
    if let Some(lr) = args.learning_rate {
        config.learning_rate = lr;
    }
    if let Some(epochs) = args.epochs {
        config.epochs = epochs;
    }
    if let Some(f) = args.train_fraction {
        config.train_fraction = f;
    }
    if let Some(p) = args.positive_class {
        config.positive_class = p;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    let report = run_pipeline(&config, &args.out)?;
    println!(
        "selected attributes: {} (dependency degree {:.4}, full: {})",
        report.selected_names.join(", "),
        report.gamma_full_value,
        report.reached_full
    );
    println!();
    println!("{}", report.tables);
    println!("artifacts written to {}", args.out.display());
    Ok(())
}
