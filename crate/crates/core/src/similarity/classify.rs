use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FeatureVector, WeightedMetric};
use crate::{Error, Result};

/// Winning label plus its typicality: the distance to the class standard,
/// so lower means more typical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub label: String,
    pub typicality: f64,
}

/// One stored mean per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrototypeModel {
    pub metric: WeightedMetric,
    pub prototypes: BTreeMap<String, FeatureVector>,
}

/// All training instances kept per class, classified by k-nearest vote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExemplarModel {
    pub metric: WeightedMetric,
    pub exemplars: BTreeMap<String, Vec<FeatureVector>>,
    pub k: usize,
}

/// JSON form of either classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelDump {
    Prototype(PrototypeModel),
    Exemplar(ExemplarModel),
}

impl ModelDump {
    pub fn classify(&self, x: &[f64]) -> Result<Classification> {
        match self {
            ModelDump::Prototype(m) => m.classify(x),
            ModelDump::Exemplar(m) => m.classify(x),
        }
    }
}

fn group_by_label(points: &[FeatureVector], labels: &[String]) -> Result<BTreeMap<String, Vec<FeatureVector>>> {
    if points.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: points.len(), got: labels.len() });
    }
    if points.is_empty() {
        return Err(Error::invalid("no training points"));
    }
    let dim = points[0].dim();
    let mut groups: BTreeMap<String, Vec<FeatureVector>> = BTreeMap::new();
    for (p, l) in points.iter().zip(labels) {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
        groups.entry(l.clone()).or_default().push(p.clone());
    }
    Ok(groups)
}

fn model_dim(metric: &WeightedMetric, first: Option<&FeatureVector>) -> Option<usize> {
    first.map(FeatureVector::dim).or_else(|| (!metric.weights.is_empty()).then_some(metric.weights.len()))
}

impl PrototypeModel {
    pub fn new(prototypes: BTreeMap<String, FeatureVector>, metric: WeightedMetric) -> Result<Self> {
        if prototypes.is_empty() {
            return Err(Error::invalid("prototype model needs at least one class"));
        }
        let dim = model_dim(&metric, prototypes.values().next()).unwrap_or(0);
        for p in prototypes.values() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
        }
        Ok(PrototypeModel { metric, prototypes })
    }

    /// Prototype of each class = mean of its training points.
    pub fn fit(points: &[FeatureVector], labels: &[String], metric: WeightedMetric) -> Result<Self> {
        let groups = group_by_label(points, labels)?;
        let prototypes = groups
            .into_iter()
            .map(|(label, members)| {
                let dim = members[0].dim();
                let mut mean = vec![0.0; dim];
                for m in &members {
                    for (acc, v) in mean.iter_mut().zip(m.iter()) {
                        *acc += v;
                    }
                }
                let n = members.len() as f64;
                mean.iter_mut().for_each(|v| *v /= n);
                Ok((label, FeatureVector::new(mean)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        PrototypeModel::new(prototypes, metric)
    }

    /// Nearest prototype; equal distances resolve to the smaller label.
    pub fn classify(&self, x: &[f64]) -> Result<Classification> {
        let mut best: Option<(f64, &str)> = None;
        for (label, proto) in &self.prototypes {
            let d = self.metric.distance(x, proto)?;
            // BTreeMap order makes strict < keep the smaller label on ties
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, label));
            }
        }
        let (typicality, label) = best.ok_or_else(|| Error::invalid("empty prototype model"))?;
        Ok(Classification { label: label.to_owned(), typicality })
    }
}

impl ExemplarModel {
    pub fn new(exemplars: BTreeMap<String, Vec<FeatureVector>>, metric: WeightedMetric, k: usize) -> Result<Self> {
        if exemplars.is_empty() {
            return Err(Error::invalid("exemplar model needs at least one class"));
        }
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let total: usize = exemplars.values().map(Vec::len).sum();
        if k > total {
            return Err(Error::invalid(format!("k = {k} exceeds the {total} stored exemplars")));
        }
        let dim = model_dim(&metric, exemplars.values().flatten().next()).unwrap_or(0);
        for (label, members) in &exemplars {
            if members.is_empty() {
                return Err(Error::invalid(format!("class {label:?} has no exemplars")));
            }
            if let Some(p) = members.iter().find(|p| p.dim() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
        }
        Ok(ExemplarModel { metric, exemplars, k })
    }

    pub fn fit(points: &[FeatureVector], labels: &[String], metric: WeightedMetric, k: usize) -> Result<Self> {
        ExemplarModel::new(group_by_label(points, labels)?, metric, k)
    }

    /// Majority vote among the k nearest exemplars. Typicality is the mean
    /// distance to those of the k neighbours that carry the winning label.
    pub fn classify(&self, x: &[f64]) -> Result<Classification> {
        let mut scored: Vec<(f64, &str, usize)> = Vec::new();
        for (label, members) in &self.exemplars {
            for (i, e) in members.iter().enumerate() {
                scored.push((self.metric.distance(x, e)?, label, i));
            }
        }
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(b.1)).then(a.2.cmp(&b.2)));
        let nearest = &scored[..self.k];

        let mut votes: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
        for &(d, label, _) in nearest {
            let v = votes.entry(label).or_default();
            v.0 += 1;
            v.1 += d;
        }
        let mut best: Option<(&str, usize, f64)> = None;
        for (label, (count, sum)) in votes {
            if best.is_none_or(|(_, c, _)| count > c) {
                best = Some((label, count, sum));
            }
        }
        let (label, count, sum) = best.expect("k >= 1");
        Ok(Classification { label: label.to_owned(), typicality: sum / count as f64 })
    }
}
