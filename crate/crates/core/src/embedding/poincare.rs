use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Taxonomy;
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Points are kept at norm ≤ 1 − BALL_EPS.
pub const BALL_EPS: f64 = 1e-5;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `arcosh(1 + 2‖u−v‖² / ((1−‖u‖²)(1−‖v‖²)))`.
pub fn poincare_distance(u: &[f64], v: &[f64]) -> f64 {
    let alpha = 1.0 - dot(u, u);
    let beta = 1.0 - dot(v, v);
    let gamma = 1.0 + 2.0 * sq_dist(u, v) / (alpha * beta);
    gamma.max(1.0).acosh()
}

/// Euclidean gradient of `poincare_distance(theta, x)` with respect to
/// `theta`.
fn distance_grad(theta: &[f64], x: &[f64]) -> Vec<f64> {
    let tt = dot(theta, theta);
    let xx = dot(x, x);
    let alpha = 1.0 - tt;
    let beta = 1.0 - xx;
    let gamma = 1.0 + 2.0 * sq_dist(theta, x) / (alpha * beta);
    let root = (gamma * gamma - 1.0).max(1e-15).sqrt();
    let scale = 4.0 / (beta * root);
    let coef_theta = (xx - 2.0 * dot(theta, x) + 1.0) / (alpha * alpha);
    theta.iter().zip(x).map(|(t, xi)| scale * (coef_theta * t - xi / alpha)).collect()
}

fn project_to_ball(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    let max = 1.0 - BALL_EPS;
    if n > max {
        let s = max / n;
        v.iter_mut().for_each(|x| *x *= s);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoincareConfig {
    pub dim: usize,
    pub epochs: usize,
    pub lr: f64,
    pub negatives: usize,
    /// Leading epochs run at `lr / 10`.
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for PoincareConfig {
    fn default() -> Self {
        PoincareConfig { dim: 2, epochs: 200, lr: 0.3, negatives: 10, burn_in: 10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicEmbedding {
    pub dim: usize,
    pub nodes: Vec<String>,
    pub points: Vec<Vec<f64>>,
    pub edges: Vec<(usize, usize)>,
}

impl HyperbolicEmbedding {
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        poincare_distance(&self.points[a], &self.points[b])
    }

    /// Mean over edges of the rank of the true parent among all other nodes
    /// by hyperbolic distance to the child (1 = nearest).
    pub fn mean_parent_rank(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        let total: usize = self
            .edges
            .iter()
            .map(|&(c, p)| {
                let dp = self.distance(c, p);
                1 + (0..self.points.len()).filter(|&w| w != c && w != p && self.distance(c, w) < dp).count()
            })
            .sum();
        total as f64 / self.edges.len() as f64
    }

    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(|p| dot(p, p).sqrt()).fold(0.0, f64::max)
    }

    pub fn to_tsv(&self) -> String {
        let space = super::EmbeddingSpace::new(self.nodes.clone(), self.points.clone()).expect("finite points");
        space.to_tsv()
    }
}

#[derive(Debug, Clone)]
pub struct PoincareOutput {
    pub embedding: HyperbolicEmbedding,
    pub loss_history: Vec<f64>,
}

/// Riemannian SGD on the Poincaré ball.
///
/// For every `(child, parent)` edge the loss is the softmax cross-entropy
/// that ranks the parent above `negatives` sampled non-neighbours of the
/// child. Euclidean gradients are rescaled by `(1−‖θ‖²)²/4` and every update
/// is projected back into the ball. When a node has no possible negatives
/// the plain distance to the parent is minimized instead.
pub fn train_poincare(tax: &Taxonomy, cfg: &PoincareConfig) -> Result<PoincareOutput> {
    if tax.len() < 2 {
        return Err(Error::invalid("taxonomy needs at least 2 nodes"));
    }
    if !(cfg.lr > 0.0) {
        return Err(Error::invalid("lr must be positive"));
    }
    if cfg.dim < 1 {
        return Err(Error::invalid("dim must be at least 1"));
    }
    let n = tax.len();
    let mut rng = rng::stream(cfg.seed, Stream::Poincare);
    let mut points: Vec<Vec<f64>> =
        (0..n).map(|_| (0..cfg.dim).map(|_| rng.random_range(-1e-3..1e-3)).collect()).collect();

    // candidate negatives of u: neither u nor one of its direct neighbours
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            let near: BTreeSet<usize> =
                tax.parents(u).iter().chain(tax.children(u)).copied().chain(std::iter::once(u)).collect();
            (0..n).filter(|w| !near.contains(w)).collect()
        })
        .collect();

    let mut edges: Vec<(usize, usize)> = tax.edges().to_vec();
    let mut loss_history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let lr = if epoch < cfg.burn_in { cfg.lr / 10.0 } else { cfg.lr };
        edges.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for &(u, v) in &edges {
            let mut targets = vec![v];
            let pool = &candidates[u];
            if !pool.is_empty() {
                for _ in 0..cfg.negatives {
                    targets.push(pool[rng.random_range(0..pool.len())]);
                }
            }
            let dists: Vec<f64> = targets.iter().map(|&t| poincare_distance(&points[u], &points[t])).collect();
            // dL/dd for each target
            let weights: Vec<f64> = if targets.len() == 1 {
                epoch_loss += dists[0];
                vec![1.0]
            } else {
                let m = dists.iter().cloned().fold(f64::INFINITY, f64::min);
                let exps: Vec<f64> = dists.iter().map(|d| (-(d - m)).exp()).collect();
                let z: f64 = exps.iter().sum();
                epoch_loss += dists[0] - m + z.ln();
                exps.iter().enumerate().map(|(i, e)| if i == 0 { 1.0 - e / z } else { -e / z }).collect()
            };
            if !epoch_loss.is_finite() {
                return Err(Error::Diverged { epoch, last_finite: loss_history.last().copied() });
            }

            let mut grad_u = vec![0.0; cfg.dim];
            let mut updates: Vec<(usize, Vec<f64>)> = Vec::with_capacity(targets.len());
            for (&t, &w) in targets.iter().zip(&weights) {
                let gu = distance_grad(&points[u], &points[t]);
                let gt = distance_grad(&points[t], &points[u]);
                grad_u.iter_mut().zip(&gu).for_each(|(a, b)| *a += w * b);
                updates.push((t, gt.into_iter().map(|g| w * g).collect()));
            }
            updates.push((u, grad_u));
            for (node, grad) in updates {
                let p = &mut points[node];
                let scale = (1.0 - dot(p, p)).powi(2) / 4.0;
                p.iter_mut().zip(&grad).for_each(|(x, g)| *x -= lr * scale * g);
                project_to_ball(p);
            }
        }
        loss_history.push(epoch_loss / edges.len() as f64);
    }
    Ok(PoincareOutput {
        embedding: HyperbolicEmbedding { dim: cfg.dim, nodes: tax.nodes().to_vec(), points, edges: tax.edges().to_vec() },
        loss_history,
    })
}
