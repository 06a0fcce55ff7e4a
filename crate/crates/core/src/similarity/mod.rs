//! Concepts as regions of a feature space: weighted metrics, prototype and
//! exemplar classifiers with distance-valued typicality, and k-means.

mod classify;
mod kmeans;
mod metric;

pub use classify::{Classification, ExemplarModel, ModelDump, PrototypeModel};
pub use kmeans::{cluster_kmeans, cluster_kmeans_with, KMeansResult};
pub use metric::{cosine_similarity, distance_euclid, distance_l1, FeatureVector, MetricKind, WeightedMetric};
