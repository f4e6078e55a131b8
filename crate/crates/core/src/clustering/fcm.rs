//! Fuzzy C-Means.
//!
//! Memberships follow the reciprocal-distance update
//! `u_j(x) = (1/d_j)^(1/(m-1)) / sum_k (1/d_k)^(1/(m-1))` with plain
//! Euclidean distances, and centroids are the membership^m weighted means.
//! A point at zero distance from a centroid gets crisp membership there,
//! split equally if it coincides with several centroids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{argmax_lower, distance, validate_matrix};
use crate::error::{Error, Result};

/// Fitted fuzzy C-Means state.
///
/// `membership` is n x c with rows summing to 1; `max_row_sum_error` is the
/// largest `|row_sum - 1|` observed across every iteration of the fit,
/// including the initial matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FcmModel {
    pub centroids: Vec<Vec<f64>>,
    pub membership: Vec<Vec<f64>>,
    pub m: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub max_row_sum_error: f64,
}

impl FcmModel {
    pub fn c(&self) -> usize {
        self.centroids.len()
    }

    /// Hard labels for the training data: argmax membership, ties to the
    /// lower cluster index.
    pub fn hard_assignments(&self) -> Vec<usize> {
        self.membership.iter().map(|row| argmax_lower(row)).collect()
    }

    /// Hard labels for new points, computed by one membership update against
    /// the stored centroids.
    pub fn predict_hard(&self, data: &[Vec<f64>]) -> Result<Vec<usize>> {
        let rows = membership_update(data, &self.centroids, self.m)?;
        Ok(rows.iter().map(|row| argmax_lower(row)).collect())
    }
}

/// Membership^m weighted means, one centroid per membership column.
///
/// Errors if a column carries zero total weight; the iterative fitter keeps
/// the previous centroid in that case instead.
pub fn weighted_centroids(
    data: &[Vec<f64>],
    membership: &[Vec<f64>],
    m: f64,
) -> Result<Vec<Vec<f64>>> {
    centroids_step(data, membership, m, None)
}

fn centroids_step(
    data: &[Vec<f64>],
    membership: &[Vec<f64>],
    m: f64,
    previous: Option<&[Vec<f64>]>,
) -> Result<Vec<Vec<f64>>> {
    let dim = validate_matrix(data)?;
    if membership.len() != data.len() {
        return Err(Error::LengthMismatch {
            left: membership.len(),
            right: data.len(),
        });
    }
    let c = membership[0].len();
    let mut out = vec![vec![0.0f64; dim]; c];
    for j in 0..c {
        let mut mass = 0.0f64;
        let mut sum = vec![0.0f64; dim];
        for (point, row) in data.iter().zip(membership) {
            let w = row[j].powf(m);
            mass += w;
            for (s, v) in sum.iter_mut().zip(point) {
                *s += w * v;
            }
        }
        if mass == 0.0 {
            match previous {
                Some(prev) => out[j] = prev[j].clone(),
                None => {
                    return Err(Error::invalid(format!(
                        "cluster {j} has zero total membership mass"
                    )))
                }
            }
        } else {
            for (o, s) in out[j].iter_mut().zip(&sum) {
                *o = s / mass;
            }
        }
    }
    Ok(out)
}

/// One membership update against fixed centroids. Rows sum to 1.
pub fn membership_update(
    data: &[Vec<f64>],
    centroids: &[Vec<f64>],
    m: f64,
) -> Result<Vec<Vec<f64>>> {
    let dim = validate_matrix(data)?;
    if centroids.is_empty() || centroids[0].len() != dim {
        return Err(Error::invalid(
            "centroid dimension does not match the data".to_string(),
        ));
    }
    if m <= 1.0 {
        return Err(Error::invalid(format!("fuzzifier m must exceed 1, got {m}")));
    }
    let exponent = 1.0 / (m - 1.0);
    let c = centroids.len();
    let mut out = Vec::with_capacity(data.len());
    for point in data {
        let dists: Vec<f64> = centroids.iter().map(|ctr| distance(point, ctr)).collect();
        let zero_hits = dists.iter().filter(|&&d| d == 0.0).count();
        let mut row = vec![0.0f64; c];
        if zero_hits > 0 {
            for (u, &d) in row.iter_mut().zip(&dists) {
                if d == 0.0 {
                    *u = 1.0 / zero_hits as f64;
                }
            }
        } else {
            // u_j = 1 / sum_k (d_j/d_k)^e, algebraically identical to the
            // reciprocal-distance ratio but immune to overflow in (1/d)^e.
            for j in 0..c {
                let denom: f64 = dists.iter().map(|&dk| (dists[j] / dk).powf(exponent)).sum();
                row[j] = 1.0 / denom;
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// Fits fuzzy C-Means from a seeded random membership matrix.
///
/// Iteration alternates the centroid and membership updates, stopping when
/// the largest absolute centroid change drops below `tol` or after
/// `max_iter` iterations. Bit-reproducible for a fixed seed.
pub fn fcm(
    data: &[Vec<f64>],
    c: usize,
    m: f64,
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> Result<FcmModel> {
    validate_matrix(data)?;
    let n = data.len();
    if c == 0 || c > n {
        return Err(Error::invalid(format!(
            "c must be between 1 and the number of points ({n}), got {c}"
        )));
    }
    if m <= 1.0 {
        return Err(Error::invalid(format!("fuzzifier m must exceed 1, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut init = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<f64> = (0..c).map(|_| rng.random_range(0.0..1.0)).collect();
        let sum: f64 = row.iter().sum();
        if sum == 0.0 {
            row = vec![1.0 / c as f64; c];
        } else {
            for u in row.iter_mut() {
                *u /= sum;
            }
        }
        init.push(row);
    }
    run(data, init, m, max_iter, tol, Some(seed))
}

/// Fits fuzzy C-Means from an explicit initial membership matrix.
///
/// Rows must already sum to 1 within 1e-6; they are renormalized exactly
/// before iteration begins.
pub fn fcm_with_init(
    data: &[Vec<f64>],
    init: Vec<Vec<f64>>,
    m: f64,
    max_iter: usize,
    tol: f64,
) -> Result<FcmModel> {
    validate_matrix(data)?;
    if m <= 1.0 {
        return Err(Error::invalid(format!("fuzzifier m must exceed 1, got {m}")));
    }
    if init.len() != data.len() {
        return Err(Error::LengthMismatch {
            left: init.len(),
            right: data.len(),
        });
    }
    let c = init.first().map_or(0, |r| r.len());
    if c == 0 || c > data.len() {
        return Err(Error::invalid(format!(
            "initial membership must have between 1 and n columns, got {c}"
        )));
    }
    let mut normalized = init;
    for (i, row) in normalized.iter_mut().enumerate() {
        if row.len() != c {
            return Err(Error::RaggedRow {
                row: i,
                expected: c,
                found: row.len(),
            });
        }
        let sum: f64 = row.iter().sum();
        if !(sum.is_finite()) || (sum - 1.0).abs() > 1e-6 || row.iter().any(|&u| u < 0.0) {
            return Err(Error::invalid(format!(
                "initial membership row {i} is not a probability row (sum {sum})"
            )));
        }
        for u in row.iter_mut() {
            *u /= sum;
        }
    }
    run(data, normalized, m, max_iter, tol, None)
}

fn run(
    data: &[Vec<f64>],
    mut membership: Vec<Vec<f64>>,
    m: f64,
    max_iter: usize,
    tol: f64,
    seed: Option<u64>,
) -> Result<FcmModel> {
    let mut max_row_sum_error = row_sum_error(&membership);
    let mut centroids = centroids_step(data, &membership, m, None)?;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        membership = membership_update(data, &centroids, m)?;
        max_row_sum_error = max_row_sum_error.max(row_sum_error(&membership));
        let new_centroids = centroids_step(data, &membership, m, Some(&centroids))?;
        let delta = new_centroids
            .iter()
            .zip(&centroids)
            .flat_map(|(new, old)| new.iter().zip(old).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        centroids = new_centroids;
        iterations += 1;
        if delta < tol {
            converged = true;
            break;
        }
    }

    Ok(FcmModel {
        centroids,
        membership,
        m,
        iterations,
        converged,
        seed,
        max_row_sum_error,
    })
}

fn row_sum_error(membership: &[Vec<f64>]) -> f64 {
    membership
        .iter()
        .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0f64, f64::max)
}
