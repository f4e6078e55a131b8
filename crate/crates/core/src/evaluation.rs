//! Confusion-matrix metrics, cluster-to-class label alignment, and the
//! plain-text report tables.
//!
//! Rates follow the convention where each pair sums to one: the printed
//! columns are sensitivity, its complement, specificity, and its complement,
//! in that order. Complements are computed as `1.0 - rate` so the pairwise
//! sums hold exactly in floating point, and a rate whose defining class is
//! absent is reported as undefined rather than silently zero. The raw 2x2
//! counts are always carried alongside the rates.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary confusion counts and derived rates for one prediction run.
///
/// `tp_rate`/`fn_rate` are `None` when no sample is actually positive;
/// `tn_rate`/`fp_rate` are `None` when no sample is actually negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub n: usize,
    pub accuracy: f64,
    pub error: f64,
    pub tp_rate: Option<f64>,
    pub fn_rate: Option<f64>,
    pub tn_rate: Option<f64>,
    pub fp_rate: Option<f64>,
}

/// Tallies predictions against truth, binarized by `positive_class`.
///
/// Works for multi-class labels too: a sample is "positive" when its label
/// equals `positive_class`, anything else is "negative".
pub fn confusion(
    predicted: &[usize],
    truth: &[usize],
    positive_class: usize,
) -> Result<ConfusionReport> {
    if predicted.is_empty() {
        return Err(Error::NoRows);
    }
    if predicted.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut tn = 0usize;
    let mut fn_ = 0usize;
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p == positive_class, t == positive_class) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let n = predicted.len();
    let accuracy = (tp + tn) as f64 / n as f64;
    // The complement form keeps accuracy + error == 1.0 exactly.
    let error = 1.0 - accuracy;
    let tp_rate = (tp + fn_ > 0).then(|| tp as f64 / (tp + fn_) as f64);
    let fn_rate = tp_rate.map(|r| 1.0 - r);
    let tn_rate = (tn + fp > 0).then(|| tn as f64 / (tn + fp) as f64);
    let fp_rate = tn_rate.map(|r| 1.0 - r);
    Ok(ConfusionReport {
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fn_,
        n,
        accuracy,
        error,
        tp_rate,
        fn_rate,
        tn_rate,
        fp_rate,
    })
}

/// A function from cluster index to class label plus the accuracy it
/// achieves against the true labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterMapping {
    pub cluster_to_class: Vec<usize>,
    pub mapped_accuracy: f64,
}

impl ClusterMapping {
    /// Relabels cluster ids into class labels.
    pub fn apply(&self, cluster_ids: &[usize]) -> Result<Vec<usize>> {
        cluster_ids
            .iter()
            .map(|&c| {
                self.cluster_to_class.get(c).copied().ok_or_else(|| {
                    Error::invalid(format!(
                        "cluster id {c} outside the {}-cluster mapping",
                        self.cluster_to_class.len()
                    ))
                })
            })
            .collect()
    }
}

/// Aligns unsupervised cluster ids with class labels.
///
/// When the cluster count equals the class count (and is at most 8, the
/// bound that keeps the factorial search exact and cheap), every permutation
/// of class labels is tried and the first one with maximal agreement wins —
/// so ties resolve to the identity mapping. Otherwise each cluster takes the
/// majority class among its members, ties to the lower class index, and
/// clusters with no members map to class 0.
pub fn map_clusters_to_classes(
    cluster_ids: &[usize],
    true_classes: &[usize],
) -> Result<ClusterMapping> {
    if cluster_ids.is_empty() {
        return Err(Error::NoRows);
    }
    if cluster_ids.len() != true_classes.len() {
        return Err(Error::LengthMismatch {
            left: cluster_ids.len(),
            right: true_classes.len(),
        });
    }
    let n_clusters = cluster_ids.iter().max().expect("nonempty") + 1;
    let n_classes = true_classes.iter().max().expect("nonempty") + 1;

    let agreement = |mapping: &[usize]| -> usize {
        cluster_ids
            .iter()
            .zip(true_classes)
            .filter(|&(&c, &t)| mapping[c] == t)
            .count()
    };

    let mapping: Vec<usize> = if n_clusters == n_classes && n_clusters <= 8 {
        let mut best: Option<(Vec<usize>, usize)> = None;
        for perm in (0..n_classes).permutations(n_classes) {
            let score = agreement(&perm);
            if best.as_ref().map_or(true, |(_, b)| score > *b) {
                best = Some((perm, score));
            }
        }
        best.expect("at least the identity permutation").0
    } else {
        (0..n_clusters)
            .map(|c| {
                let mut votes = vec![0usize; n_classes];
                for (&id, &t) in cluster_ids.iter().zip(true_classes) {
                    if id == c {
                        votes[t] += 1;
                    }
                }
                // max_by_key keeps the *last* maximum, so scan by hand to
                // keep ties on the lower class index.
                let mut best = 0;
                for (class, &v) in votes.iter().enumerate().skip(1) {
                    if v > votes[best] {
                        best = class;
                    }
                }
                best
            })
            .collect()
    };

    let mapped_accuracy = agreement(&mapping) as f64 / cluster_ids.len() as f64;
    Ok(ClusterMapping {
        cluster_to_class: mapping,
        mapped_accuracy,
    })
}

/// One line of the report tables: where the numbers came from and what they
/// were.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub dataset: String,
    pub method: String,
    pub report: ConfusionReport,
}

fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

fn fmt4_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), fmt4)
}

fn render_table(title: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let line = |cells: &[String], widths: &[usize]| -> String {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let _ = writeln!(out, "{}", line(&header_cells, &widths));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", line(&rule, &widths));
    for row in rows {
        let _ = writeln!(out, "{}", line(row, &widths));
    }
    out
}

/// Renders the three aligned plain-text tables: per-class rates, accuracy,
/// and error.
///
/// Rate columns appear in the conventional printed order — tp rate, then its
/// complement labeled "fp rate", then tn rate, then its complement labeled
/// "fn rate" — so each adjacent pair sums to one. The error column always
/// equals one minus the accuracy column. Empty input renders headers only.
pub fn metrics_tables(rows: &[MetricsRow]) -> String {
    let rate_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.dataset.clone(),
                r.method.clone(),
                fmt4_opt(r.report.tp_rate),
                fmt4_opt(r.report.fn_rate),
                fmt4_opt(r.report.tn_rate),
                fmt4_opt(r.report.fp_rate),
            ]
        })
        .collect();
    let accuracy_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.dataset.clone(),
                r.method.clone(),
                fmt4(r.report.accuracy),
            ]
        })
        .collect();
    let error_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.dataset.clone(), r.method.clone(), fmt4(r.report.error)])
        .collect();

    let mut out = String::new();
    out.push_str(&render_table(
        "Classification performance rates",
        &["dataset", "method", "tp rate", "fp rate", "tn rate", "fn rate"],
        &rate_rows,
    ));
    out.push('\n');
    out.push_str(&render_table(
        "Classification accuracy",
        &["dataset", "method", "accuracy"],
        &accuracy_rows,
    ));
    out.push('\n');
    out.push_str(&render_table(
        "Classification error",
        &["dataset", "method", "error"],
        &error_rows,
    ));
    out
}
