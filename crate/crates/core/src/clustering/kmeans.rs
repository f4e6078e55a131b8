//! Lloyd's algorithm with seeded initialization and deterministic
//! empty-cluster repair.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{nearest, squared_distance, validate_matrix};
use crate::error::{Error, Result};

/// Fitted K-Means state.
///
/// `inertia_history` holds the within-cluster sum of squares at the end of
/// each iteration; Lloyd updates only ever lower it, which the acceptance
/// suite asserts run by run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KMeansModel {
    pub centroids: Vec<Vec<f64>>,
    pub assignments: Vec<usize>,
    pub inertia: f64,
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

impl KMeansModel {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Nearest-centroid assignment for new points; ties go to the lower
    /// cluster index.
    pub fn predict(&self, data: &[Vec<f64>]) -> Result<Vec<usize>> {
        let dim = validate_matrix(data)?;
        if dim != self.centroids[0].len() {
            return Err(Error::LengthMismatch {
                left: dim,
                right: self.centroids[0].len(),
            });
        }
        Ok(data.iter().map(|p| nearest(p, &self.centroids)).collect())
    }
}

/// Runs K-Means on `data` with `k` clusters.
///
/// Initial centroids are `k` distinct data points sampled with a ChaCha8
/// generator seeded from `seed`. Iteration stops when the post-repair
/// assignment vector repeats, when the largest centroid coordinate change
/// drops below `tol`, or after `max_iter` iterations.
///
/// Empty clusters are repaired before the mean update: scanning empty
/// clusters in ascending index order, each one takes the point farthest from
/// its current centroid (ties to the lowest point index, points already taken
/// in the same pass excluded) and owns it for that iteration. Convergence
/// therefore implies every cluster is non-empty.
pub fn kmeans(
    data: &[Vec<f64>],
    k: usize,
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> Result<KMeansModel> {
    validate_matrix(data)?;
    let n = data.len();
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "k must be between 1 and the number of points ({n}), got {k}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids: Vec<Vec<f64>> = rand::seq::index::sample(&mut rng, n, k)
        .iter()
        .map(|i| data[i].clone())
        .collect();

    let mut assignments: Vec<usize> = vec![0; n];
    let mut prev_assignments: Option<Vec<usize>> = None;
    let mut inertia_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        for (i, point) in data.iter().enumerate() {
            assignments[i] = nearest(point, &centroids);
        }
        repair_empty_clusters(data, &mut centroids, &mut assignments, k);

        let old_centroids = centroids.clone();
        update_means(data, &assignments, &mut centroids);

        let inertia: f64 = data
            .iter()
            .zip(&assignments)
            .map(|(p, &a)| squared_distance(p, &centroids[a]))
            .sum();
        inertia_history.push(inertia);
        iterations += 1;

        if prev_assignments.as_deref() == Some(assignments.as_slice()) {
            converged = true;
            break;
        }
        let movement = centroids
            .iter()
            .zip(&old_centroids)
            .flat_map(|(new, old)| new.iter().zip(old).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if movement < tol {
            converged = true;
            break;
        }
        prev_assignments = Some(assignments.clone());
    }

    let inertia = *inertia_history.last().unwrap_or(&0.0);
    Ok(KMeansModel {
        centroids,
        assignments,
        inertia,
        inertia_history,
        iterations,
        converged,
        seed,
    })
}

fn repair_empty_clusters(
    data: &[Vec<f64>],
    centroids: &mut [Vec<f64>],
    assignments: &mut [usize],
    k: usize,
) {
    let mut counts = vec![0usize; k];
    for &a in assignments.iter() {
        counts[a] += 1;
    }
    let mut taken: Vec<usize> = Vec::new();
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        let mut far: Option<(usize, f64)> = None;
        for (p, point) in data.iter().enumerate() {
            if taken.contains(&p) {
                continue;
            }
            let d = squared_distance(point, &centroids[j]);
            if far.map_or(true, |(_, best)| d > best) {
                far = Some((p, d));
            }
        }
        if let Some((p, _)) = far {
            counts[assignments[p]] = counts[assignments[p]].saturating_sub(1);
            centroids[j] = data[p].clone();
            assignments[p] = j;
            counts[j] = 1;
            taken.push(p);
        }
    }
}

fn update_means(data: &[Vec<f64>], assignments: &[usize], centroids: &mut [Vec<f64>]) {
    let dim = data[0].len();
    let k = centroids.len();
    let mut sums = vec![vec![0.0f64; dim]; k];
    let mut counts = vec![0usize; k];
    for (point, &a) in data.iter().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(point) {
            *s += v;
        }
    }
    for j in 0..k {
        if counts[j] == 0 {
            continue; // keep the previous centroid for a drained cluster
        }
        for (c, s) in centroids[j].iter_mut().zip(&sums[j]) {
            *c = s / counts[j] as f64;
        }
    }
}
