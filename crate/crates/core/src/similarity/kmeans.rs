use rand::seq::SliceRandom;
use serde::Serialize;

use crate::rng::{self, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each assignment step.
    pub wcss: Vec<f64>,
    pub converged: bool,
}

pub fn cluster_kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansResult> {
    cluster_kmeans_with(points, k, seed, 100)
}

/// Lloyd's algorithm, initialised with the first `k` points of a seeded
/// shuffle. Stops at an assignment fixpoint or after `max_iter` rounds.
/// A centroid whose cluster empties keeps its previous position.
pub fn cluster_kmeans_with(points: &[Vec<f64>], k: usize, seed: u64, max_iter: usize) -> Result<KMeansResult> {
    if points.is_empty() {
        return Err(Error::invalid("k-means on an empty point set"));
    }
    if k == 0 || k > points.len() {
        return Err(Error::invalid(format!("k = {k} must lie in 1..={}", points.len())));
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut rng::stream(seed, Stream::KMeans));
    let mut centroids: Vec<Vec<f64>> = order[..k].iter().map(|&i| points[i].clone()).collect();

    let mut assignments = vec![usize::MAX; points.len()];
    let mut wcss = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter.max(1) {
        let mut changed = false;
        let mut total = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (best, d) = nearest(p, &centroids);
            total += d;
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
        }
        wcss.push(total);
        if !changed {
            converged = true;
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &a) in points.iter().zip(&assignments) {
            counts[a] += 1;
            for (s, v) in sums[a].iter_mut().zip(p) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    Ok(KMeansResult { assignments, centroids, wcss, converged })
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d: f64 = p.iter().zip(centroid).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}
