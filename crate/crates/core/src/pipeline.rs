//! End-to-end orchestration: load → discretize → reduct → cluster/classify
//! → evaluate, with every artifact written to disk and digested into a
//! manifest.
//!
//! Reruns with the same configuration produce byte-identical artifacts: all
//! randomness flows from the master seed through named per-stage seeds, maps
//! are ordered, artifact paths are stored relative to the output directory,
//! and no timestamps are recorded. The clustering metrics are computed on
//! the full dataset (clustering never sees the labels); the classifier
//! metrics come from a held-out stratified test split.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{
    self, Network, NetworkConfig, TrainReport, UpdateMode, DEFAULT_WEIGHT_SCALE,
};
use crate::clustering::{self, FcmModel, KMeansModel};
use crate::error::{Error, Result};
use crate::evaluation::{
    confusion, map_clusters_to_classes, metrics_tables, ClusterMapping, ConfusionReport,
    MetricsRow,
};
use crate::roughset::{self, ReductReport};
use crate::seeding;
use crate::table::{
    discretize, fit_discretizer, load_csv, ClassColumn, CsvFormat, DecisionTable, RawMatrix,
    DEFAULT_BINS,
};

/// How the reduct is searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductMethod {
    /// Greedy forward selection.
    #[default]
    Quick,
    /// Full subset enumeration; also reports every reduct and the core.
    Exhaustive,
}

/// Which clustering algorithms the pipeline runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterAlgorithm {
    KMeans,
    Fcm,
}

fn default_delimiter() -> char {
    ','
}

fn default_has_header() -> bool {
    true
}

fn default_bins() -> usize {
    DEFAULT_BINS
}

fn default_clusterers() -> Vec<ClusterAlgorithm> {
    vec![ClusterAlgorithm::KMeans, ClusterAlgorithm::Fcm]
}

fn default_fcm_m() -> f64 {
    2.0
}

fn default_cluster_max_iter() -> usize {
    clustering::DEFAULT_MAX_ITER
}

fn default_cluster_tol() -> f64 {
    clustering::DEFAULT_TOL
}

fn default_learning_rate() -> f64 {
    0.5
}

fn default_epochs() -> usize {
    500
}

fn default_train_fraction() -> f64 {
    0.7
}

/// Everything one pipeline run depends on. Serializable so a run can be
/// driven from a JSON file; every field except `input` has a default.
///
/// The output directory is deliberately not part of the configuration: it is
/// passed to [`run_pipeline`] separately and never echoed into artifacts, so
/// the same configuration produces byte-identical output anywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// CSV file with one class-label column.
    pub input: PathBuf,
    /// Label used in report tables; defaults to the input file stem.
    #[serde(default)]
    pub dataset_name: Option<String>,
    #[serde(default)]
    pub class_column: ClassColumn,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default = "default_has_header")]
    pub has_header: bool,
    /// Discretization bins per attribute.
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub reduct_method: ReductMethod,
    #[serde(default = "default_clusterers")]
    pub clusterers: Vec<ClusterAlgorithm>,
    /// Fuzziness exponent for FCM, in [1.05, 10].
    #[serde(default = "default_fcm_m")]
    pub fcm_m: f64,
    #[serde(default = "default_cluster_max_iter")]
    pub cluster_max_iter: usize,
    #[serde(default = "default_cluster_tol")]
    pub cluster_tol: f64,
    /// Hidden-layer widths; `None` means one layer of `max(2, 2d+1)` where
    /// `d` is the number of selected attributes.
    #[serde(default)]
    pub hidden_sizes: Option<Vec<usize>>,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    /// Fraction of samples in the classifier's training split.
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    /// Class code (first-appearance order) treated as positive in the
    /// confusion reports.
    #[serde(default)]
    pub positive_class: usize,
    /// Master seed; each stage derives its own seed from it by name.
    #[serde(default)]
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            input: input.into(),
            dataset_name: None,
            class_column: ClassColumn::default(),
            delimiter: default_delimiter(),
            has_header: default_has_header(),
            bins: default_bins(),
            reduct_method: ReductMethod::default(),
            clusterers: default_clusterers(),
            fcm_m: default_fcm_m(),
            cluster_max_iter: default_cluster_max_iter(),
            cluster_tol: default_cluster_tol(),
            hidden_sizes: None,
            learning_rate: default_learning_rate(),
            epochs: default_epochs(),
            train_fraction: default_train_fraction(),
            positive_class: 0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delimiter.is_ascii() {
            return Err(Error::invalid(format!(
                "delimiter {:?} is not an ASCII character",
                self.delimiter
            )));
        }
        if self.bins == 0 {
            return Err(Error::invalid("bins must be at least 1".to_string()));
        }
        if !(1.05..=10.0).contains(&self.fcm_m) {
            return Err(Error::invalid(format!(
                "fcm fuzziness must lie in [1.05, 10], got {}",
                self.fcm_m
            )));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::invalid(format!(
                "train fraction must be strictly between 0 and 1, got {}",
                self.train_fraction
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::invalid(format!(
                "learning rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        Ok(())
    }

    pub fn dataset_label(&self) -> String {
        if let Some(name) = &self.dataset_name {
            return name.clone();
        }
        self.input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string())
    }

    fn csv_format(&self) -> CsvFormat {
        CsvFormat {
            delimiter: self.delimiter as u8,
            has_header: self.has_header,
        }
    }
}

/// Parameters of the synthetic gene-expression generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub samples: usize,
    /// Count of class-dependent genes (placed first in the column order).
    pub informative: usize,
    /// Count of class-independent uniform-noise genes.
    pub noise: usize,
    pub classes: usize,
    /// Distance between adjacent class means of an informative gene, in
    /// units of the gene's standard deviation.
    pub separation: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.classes == 0 {
            return Err(Error::invalid("need at least one class".to_string()));
        }
        if self.samples < self.classes {
            return Err(Error::invalid(format!(
                "{} samples cannot cover {} classes",
                self.samples, self.classes
            )));
        }
        if self.informative == 0 {
            return Err(Error::invalid(
                "need at least one informative gene".to_string(),
            ));
        }
        if !(self.separation.is_finite() && self.separation >= 0.0) {
            return Err(Error::invalid(format!(
                "separation must be a non-negative finite number, got {}",
                self.separation
            )));
        }
        Ok(())
    }
}

/// A generated matrix plus the ground truth about which genes carry signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticData {
    pub matrix: RawMatrix,
    pub informative_genes: Vec<String>,
    pub spec: SyntheticSpec,
}

// Uniform distributions with unit standard deviation need half-width √3.
const UNIT_SD_HALF_WIDTH: f64 = 1.732_050_807_568_877_2;

/// Deterministic synthetic dataset: classes assigned round-robin, each
/// informative gene drawn uniformly around `class * separation` with unit
/// standard deviation (so `separation` is in σ units and supports of
/// adjacent classes are disjoint once it exceeds 2√3 ≈ 3.46), and noise
/// genes drawn uniformly from [0, 1) regardless of class. Informative genes
/// come first in the column order.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total_genes = spec.informative + spec.noise;
    let attribute_names: Vec<String> = (0..total_genes).map(|j| format!("g{j:03}")).collect();

    let mut values = Vec::with_capacity(spec.samples);
    let mut class_labels = Vec::with_capacity(spec.samples);
    for i in 0..spec.samples {
        let class = i % spec.classes;
        let mut row = Vec::with_capacity(total_genes);
        for _ in 0..spec.informative {
            let center = class as f64 * spec.separation;
            row.push(center + rng.random_range(-UNIT_SD_HALF_WIDTH..UNIT_SD_HALF_WIDTH));
        }
        for _ in 0..spec.noise {
            row.push(rng.random_range(0.0..1.0));
        }
        values.push(row);
        class_labels.push(class);
    }
    let class_names = (0..spec.classes).map(|c| c.to_string()).collect();
    let matrix = RawMatrix::new(values, attribute_names, class_labels, class_names)?;
    let informative_genes = matrix.attribute_names[..spec.informative].to_vec();
    Ok(SyntheticData {
        matrix,
        informative_genes,
        spec: spec.clone(),
    })
}

/// Writes a matrix as a comma-separated file with a header row; the class
/// column goes last under `class_column_name`. Values use the shortest
/// round-tripping decimal form, so loading the file back reproduces the
/// matrix bit for bit.
pub fn write_matrix_csv(
    matrix: &RawMatrix,
    class_column_name: &str,
    path: &Path,
) -> Result<()> {
    let mut out = String::new();
    for name in &matrix.attribute_names {
        out.push_str(name);
        out.push(',');
    }
    out.push_str(class_column_name);
    out.push('\n');
    for (row, &label) in matrix.values.iter().zip(&matrix.class_labels) {
        for v in row {
            out.push_str(&format!("{v}"));
            out.push(',');
        }
        out.push_str(&matrix.class_names[label]);
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Serializes a value as pretty JSON into `path`.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Serde {
        context: format!("serializing {}", path.display()),
        source,
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a JSON value from `path`.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Serde {
        context: format!("parsing {}", path.display()),
        source,
    })
}

/// Size and content hash of one written artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactDigest {
    pub bytes: u64,
    pub sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes named artifacts under one directory and remembers their digests.
struct ArtifactStore {
    dir: PathBuf,
    digests: BTreeMap<String, ArtifactDigest>,
}

impl ArtifactStore {
    fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(ArtifactStore {
            dir: dir.to_path_buf(),
            digests: BTreeMap::new(),
        })
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|source| Error::Io { path, source })?;
        self.digests.insert(
            name.to_string(),
            ArtifactDigest {
                bytes: bytes.len() as u64,
                sha256: sha256_hex(bytes),
            },
        );
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Serde {
            context: format!("serializing {name}"),
            source,
        })?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        self.write_bytes(name, text.as_bytes())
    }
}

/// What each downstream consumer sees after the attribute selection. These
/// are fixed design choices, recorded so a run is self-describing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representations {
    pub clustering: String,
    pub classifier: String,
}

impl Default for Representations {
    fn default() -> Self {
        Representations {
            clustering: "original real values of the selected columns".to_string(),
            classifier: "discretized codes of the selected columns rescaled to [0, 1]"
                .to_string(),
        }
    }
}

/// Index of everything a run produced: the configuration, the seeds each
/// stage used, and a digest per artifact (paths relative to the run
/// directory). `complete` is false when a stage failed partway and the
/// artifacts listed are the ones written before the failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub complete: bool,
    pub error: Option<String>,
    pub master_seed: u64,
    pub stage_seeds: BTreeMap<String, u64>,
    pub representations: Representations,
    pub config: PipelineConfig,
    pub artifacts: BTreeMap<String, ArtifactDigest>,
}

/// Cluster-stage artifact: the mapping chosen for the clusters and the
/// confusion of the mapped labels against the truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterEvaluation {
    pub mapping: ClusterMapping,
    pub confusion: ConfusionReport,
}

/// Classifier-stage artifact: split sizes, training summary, and the
/// held-out confusion report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierEvaluation {
    pub train_samples: usize,
    pub test_samples: usize,
    pub final_train_accuracy: f64,
    pub test_confusion: ConfusionReport,
}

/// Classifier-stage model artifact: the trained network with its exact
/// configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkArtifact {
    pub config: NetworkConfig,
    pub network: Network,
}

/// Exhaustive-search artifact listing every reduct and the core.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub reduct_indices: Vec<Vec<usize>>,
    pub reduct_names: Vec<Vec<String>>,
    pub minimal_indices: Vec<Vec<usize>>,
    pub core_indices: Vec<usize>,
    pub core_names: Vec<String>,
    pub gamma_full_value: f64,
}

impl ExhaustiveReport {
    /// Flattens a finished exhaustive search, resolving attribute names
    /// against the table it ran on.
    pub fn from_search(
        found: &roughset::ExhaustiveReducts,
        table: &DecisionTable,
    ) -> Result<Self> {
        let core = roughset::core_attributes(&found.reducts)?;
        let names_of = |attrs: &std::collections::BTreeSet<usize>| -> Vec<String> {
            attrs
                .iter()
                .map(|&a| table.attribute_names()[a].clone())
                .collect()
        };
        let indices_of = |sets: &[std::collections::BTreeSet<usize>]| -> Vec<Vec<usize>> {
            sets.iter().map(|r| r.iter().copied().collect()).collect()
        };
        Ok(ExhaustiveReport {
            reduct_indices: indices_of(&found.reducts),
            reduct_names: found.reducts.iter().map(&names_of).collect(),
            minimal_indices: indices_of(&found.minimal),
            core_indices: core.iter().copied().collect(),
            core_names: names_of(&core),
            gamma_full_value: found.gamma_full.as_f64(),
        })
    }
}

/// What [`run_pipeline`] hands back for display.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub dataset: String,
    pub selected_indices: Vec<usize>,
    pub selected_names: Vec<String>,
    pub gamma_full_value: f64,
    pub reached_full: bool,
    pub metrics: Vec<MetricsRow>,
    /// Rendered plain-text metric tables.
    pub tables: String,
}

const STAGE_NAMES: [&str; 5] = ["discretize", "kmeans", "fcm", "split", "bpn"];

fn stage_seeds_for(master: u64) -> BTreeMap<String, u64> {
    STAGE_NAMES
        .iter()
        .map(|&name| (name.to_string(), seeding::stage_seed(master, name)))
        .collect()
}

/// Runs the full pipeline, writing artifacts and a manifest into `out_dir`.
///
/// Stages run in order: load, discretize, reduct, cluster (K-Means and/or
/// FCM on the selected real-valued columns, one model per algorithm),
/// classify (network on the selected discretized columns rescaled to
/// [0, 1]), evaluate. A failure in any stage aborts the run with the stage's
/// name attached and leaves a manifest with `complete: false` describing
/// what was written.
pub fn run_pipeline(config: &PipelineConfig, out_dir: &Path) -> Result<RunReport> {
    config.validate()?;
    let mut store = ArtifactStore::create(out_dir)?;
    let stage_seeds = stage_seeds_for(config.seed);

    let outcome = run_stages(config, &stage_seeds, &mut store);
    let manifest = Manifest {
        complete: outcome.is_ok(),
        error: outcome.as_ref().err().map(|e| e.to_string()),
        master_seed: config.seed,
        stage_seeds,
        representations: Representations::default(),
        config: config.clone(),
        artifacts: store.digests.clone(),
    };
    let manifest_path = out_dir.join("manifest.json");
    match outcome {
        Ok(report) => {
            write_json(&manifest, &manifest_path)?;
            Ok(report)
        }
        Err(err) => {
            // Best effort: the stage error is the one worth reporting.
            let _ = write_json(&manifest, &manifest_path);
            Err(err)
        }
    }
}

fn run_stages(
    config: &PipelineConfig,
    stage_seeds: &BTreeMap<String, u64>,
    store: &mut ArtifactStore,
) -> Result<RunReport> {
    let seed_of = |name: &str| stage_seeds[name];
    let dataset = config.dataset_label();

    // Load.
    let matrix = (|| -> Result<RawMatrix> {
        let matrix = load_csv(&config.input, config.csv_format(), &config.class_column)?;
        if config.positive_class >= matrix.n_classes() {
            return Err(Error::invalid(format!(
                "positive class {} does not exist: the data has {} classes",
                config.positive_class,
                matrix.n_classes()
            )));
        }
        Ok(matrix)
    })()
    .map_err(|e| Error::in_stage("load", e))?;

    // Discretize.
    let table = (|| -> Result<DecisionTable> {
        let disc = fit_discretizer(&matrix, config.bins, seed_of("discretize"))?;
        let table = discretize(&matrix, &disc)?;
        store.write_json("discretization.json", &disc.report(&matrix.attribute_names))?;
        store.write_json("table.json", &table)?;
        Ok(table)
    })()
    .map_err(|e| Error::in_stage("discretize", e))?;

    // Reduct.
    let reduct_report = (|| -> Result<ReductReport> {
        let report = match config.reduct_method {
            ReductMethod::Quick => {
                let result = roughset::quick_reduct(&table)?;
                result.report(&table)
            }
            ReductMethod::Exhaustive => {
                let found =
                    roughset::exhaustive_reducts(&table, roughset::DEFAULT_EXHAUSTIVE_CAP)?;
                let inventory = ExhaustiveReport::from_search(&found, &table)?;
                store.write_json("exhaustive_reducts.json", &inventory)?;
                let chosen = found.minimal[0].clone();
                ReductReport {
                    selected_indices: chosen.iter().copied().collect(),
                    selected_names: chosen
                        .iter()
                        .map(|&a| table.attribute_names()[a].clone())
                        .collect(),
                    gamma_trace: Vec::new(),
                    gamma_full: found.gamma_full,
                    gamma_full_value: found.gamma_full.as_f64(),
                    reached_full: true,
                }
            }
        };
        if report.selected_indices.is_empty() {
            return Err(Error::invalid(format!(
                "the reduct is empty (γ of the full attribute set is {}): \
                 either the decision is constant or the discretized \
                 attributes cannot distinguish any samples — try more bins",
                report.gamma_full
            )));
        }
        store.write_json("reduct.json", &report)?;
        Ok(report)
    })()
    .map_err(|e| Error::in_stage("reduct", e))?;

    let attr_set: std::collections::BTreeSet<usize> =
        reduct_report.selected_indices.iter().copied().collect();
    let mut metrics: Vec<MetricsRow> = Vec::new();

    // Cluster on the selected real-valued columns; one cluster per class.
    let k = matrix.n_classes();
    let reduced = matrix
        .select_columns(&attr_set)
        .map_err(|e| Error::in_stage("cluster", e))?;

    if config.clusterers.contains(&ClusterAlgorithm::KMeans) {
        let row = (|| -> Result<MetricsRow> {
            let model: KMeansModel = clustering::kmeans(
                &reduced.values,
                k,
                seed_of("kmeans"),
                config.cluster_max_iter,
                config.cluster_tol,
            )?;
            let mapping = map_clusters_to_classes(&model.assignments, &matrix.class_labels)?;
            let mapped = mapping.apply(&model.assignments)?;
            let report = confusion(&mapped, &matrix.class_labels, config.positive_class)?;
            store.write_json("kmeans_model.json", &model)?;
            store.write_json(
                "kmeans_eval.json",
                &ClusterEvaluation {
                    mapping,
                    confusion: report.clone(),
                },
            )?;
            Ok(MetricsRow {
                dataset: dataset.clone(),
                method: "kmeans".to_string(),
                report,
            })
        })()
        .map_err(|e| Error::in_stage("kmeans", e))?;
        metrics.push(row);
    }

    if config.clusterers.contains(&ClusterAlgorithm::Fcm) {
        let row = (|| -> Result<MetricsRow> {
            let model: FcmModel = clustering::fcm(
                &reduced.values,
                k,
                config.fcm_m,
                seed_of("fcm"),
                config.cluster_max_iter,
                config.cluster_tol,
            )?;
            let hard = model.hard_assignments();
            let mapping = map_clusters_to_classes(&hard, &matrix.class_labels)?;
            let mapped = mapping.apply(&hard)?;
            let report = confusion(&mapped, &matrix.class_labels, config.positive_class)?;
            store.write_json("fcm_model.json", &model)?;
            store.write_json(
                "fcm_eval.json",
                &ClusterEvaluation {
                    mapping,
                    confusion: report.clone(),
                },
            )?;
            Ok(MetricsRow {
                dataset: dataset.clone(),
                method: "fcm".to_string(),
                report,
            })
        })()
        .map_err(|e| Error::in_stage("fcm", e))?;
        metrics.push(row);
    }

    // Classify on the selected discretized columns, rescaled into [0, 1].
    let row = (|| -> Result<MetricsRow> {
        let projected = table.project(&attr_set)?;
        let inputs = rescaled_inputs(&projected);
        let labels = projected.decision_codes();

        let (train_idx, test_idx) =
            classifier::stratified_split(labels, config.train_fraction, seed_of("split"))?;
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

        let net_config = NetworkConfig {
            input_dim: projected.n_attributes(),
            hidden_sizes: config
                .hidden_sizes
                .clone()
                .unwrap_or_else(|| vec![(2 * projected.n_attributes() + 1).max(2)]),
            output_dim: matrix.n_classes(),
            learning_rate: config.learning_rate,
            epochs: config.epochs,
            seed: seed_of("bpn"),
            weight_init_scale: DEFAULT_WEIGHT_SCALE,
            update_mode: UpdateMode::Stochastic,
        };
        let mut net = classifier::init_network(&net_config)?;
        let train_report: TrainReport =
            classifier::train(&mut net, &train_inputs, &train_labels, &net_config)?;

        let predictions = classifier::predict_batch(&net, &test_inputs)?;
        let report = confusion(&predictions, &test_labels, config.positive_class)?;

        let mut loss_csv = String::from("epoch,loss\n");
        for (epoch, loss) in train_report.epoch_loss.iter().enumerate() {
            loss_csv.push_str(&format!("{},{loss}\n", epoch + 1));
        }
        store.write_text("train_loss.csv", &loss_csv)?;
        store.write_json(
            "bpn_model.json",
            &NetworkArtifact {
                config: net_config,
                network: net,
            },
        )?;
        store.write_json(
            "bpn_eval.json",
            &ClassifierEvaluation {
                train_samples: train_idx.len(),
                test_samples: test_idx.len(),
                final_train_accuracy: train_report.final_train_accuracy,
                test_confusion: report.clone(),
            },
        )?;
        Ok(MetricsRow {
            dataset: dataset.clone(),
            method: "bpn".to_string(),
            report,
        })
    })()
    .map_err(|e| Error::in_stage("classify", e))?;
    metrics.push(row);

    // Evaluate.
    let tables = (|| -> Result<String> {
        let tables = metrics_tables(&metrics);
        store.write_json("metrics.json", &metrics)?;
        store.write_text("metrics.txt", &tables)?;
        Ok(tables)
    })()
    .map_err(|e| Error::in_stage("evaluate", e))?;

    Ok(RunReport {
        dataset,
        selected_indices: reduct_report.selected_indices.clone(),
        selected_names: reduct_report.selected_names.clone(),
        gamma_full_value: reduct_report.gamma_full_value,
        reached_full: reduct_report.reached_full,
        metrics,
        tables,
    })
}

/// Network inputs from a discretized table: each column's codes divided by
/// its largest code, so every value lands in [0, 1]. Single-code columns map
/// to 0.
pub fn rescaled_inputs(table: &DecisionTable) -> Vec<Vec<f64>> {
    let cards: Vec<usize> = (0..table.n_attributes())
        .map(|j| table.column_cardinality(j))
        .collect();
    (0..table.universe_size())
        .map(|i| {
            cards
                .iter()
                .enumerate()
                .map(|(j, &card)| {
                    if card <= 1 {
                        0.0
                    } else {
                        table.code(i, j) as f64 / (card - 1) as f64
                    }
                })
                .collect()
        })
        .collect()
}
