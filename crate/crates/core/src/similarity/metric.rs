use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Finite real coordinates `x_i(a)` of an item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("feature {i} is not finite")));
        }
        Ok(FeatureVector(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for FeatureVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        FeatureVector::new(v)
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(v: FeatureVector) -> Self {
        v.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    WeightedL1,
    WeightedEuclidean,
    /// `1 − cos(a, b)`; weights are ignored.
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMetric {
    pub kind: MetricKind,
    #[serde(default)]
    pub weights: Vec<f64>,
}

impl WeightedMetric {
    pub fn new(kind: MetricKind, weights: Vec<f64>) -> Result<Self> {
        check_weights(&weights)?;
        Ok(WeightedMetric { kind, weights })
    }

    pub fn unit(kind: MetricKind, dim: usize) -> Self {
        WeightedMetric { kind, weights: vec![1.0; dim] }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        WeightedMetric { kind: self.kind, weights: self.weights.iter().map(|w| w * factor).collect() }
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self.kind {
            MetricKind::WeightedL1 => distance_l1(a, b, &self.weights),
            MetricKind::WeightedEuclidean => distance_euclid(a, b, &self.weights),
            MetricKind::Cosine => {
                check_dims(a.len(), b.len())?;
                Ok(1.0 - cosine_similarity(a, b)?)
            }
        }
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn check_weights(w: &[f64]) -> Result<()> {
    if let Some(i) = w.iter().position(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::invalid(format!("weight {i} must be finite and non-negative, got {}", w[i])));
    }
    Ok(())
}

fn check_pair(a: &[f64], b: &[f64], w: &[f64]) -> Result<()> {
    check_dims(a.len(), b.len())?;
    check_dims(a.len(), w.len())?;
    check_weights(w)
}

/// `Σ w_i |a_i − b_i|`.
pub fn distance_l1(a: &[f64], b: &[f64], w: &[f64]) -> Result<f64> {
    check_pair(a, b, w)?;
    Ok(a.iter().zip(b).zip(w).map(|((x, y), w)| w * (x - y).abs()).sum())
}

/// `√(Σ w_i (a_i − b_i)²)`.
///
/// The square root is taken of the whole weighted sum; summing per-term
/// roots instead would give the L1 distance of `√w`-scaled coordinates.
pub fn distance_euclid(a: &[f64], b: &[f64], w: &[f64]) -> Result<f64> {
    check_pair(a, b, w)?;
    Ok(a.iter().zip(b).zip(w).map(|((x, y), w)| w * (x - y) * (x - y)).sum::<f64>().sqrt())
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    check_dims(a.len(), b.len())?;
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::domain("cosine similarity of a zero vector"));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}
