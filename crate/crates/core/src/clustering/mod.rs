//! Seeded K-Means and fuzzy C-Means over row-major `Vec<Vec<f64>>` data.
//!
//! Both fitters are bit-reproducible for a fixed seed and share the same
//! hard-assignment tie rule: equal distance or equal membership resolves to
//! the lower cluster index.

mod fcm;
mod kmeans;

pub use fcm::{fcm, fcm_with_init, membership_update, weighted_centroids, FcmModel};
pub use kmeans::{kmeans, KMeansModel};

use crate::error::{Error, Result};

/// Default iteration cap for both algorithms.
pub const DEFAULT_MAX_ITER: usize = 300;
/// Default convergence tolerance on centroid movement.
pub const DEFAULT_TOL: f64 = 1e-6;

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// Index of the nearest centroid; ties resolve to the lower index.
pub(crate) fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = squared_distance(point, &centroids[0]);
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = squared_distance(point, c);
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

/// Checks that `data` is a non-empty rectangular matrix with positive width.
pub(crate) fn validate_matrix(data: &[Vec<f64>]) -> Result<usize> {
    if data.is_empty() {
        return Err(Error::NoRows);
    }
    let dim = data[0].len();
    if dim == 0 {
        return Err(Error::invalid("data points must have at least one dimension"));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::RaggedRow {
                row: i,
                expected: dim,
                found: row.len(),
            });
        }
    }
    Ok(dim)
}

/// Argmax with ties resolved to the lower index.
pub(crate) fn argmax_lower(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = j;
        }
    }
    best
}
