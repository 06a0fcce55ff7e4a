//! Seeded synthetic data and the plain-text file formats shared by the
//! other modules.
//!
//! Every generator is a pure function of its arguments: the seed selects a
//! dedicated random stream (see [`crate::rng`]), so identical calls give
//! bit-identical output.

mod io;

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

pub use io::{corpus_from_text, corpus_to_text, Corpus, PointSet};

use crate::embedding::Taxonomy;
use crate::lattice::Context;
use crate::rng::{self, Stream};
use crate::{Error, Result};

const MAX_TREE_NODES: u128 = 1_000_000;

pub fn gen_context(objects: usize, attributes: usize, density: f64, seed: u64) -> Result<Context> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::invalid(format!("density {density} outside [0, 1]")));
    }
    let mut r = rng::stream(seed, Stream::Context);
    let incidence = (0..objects)
        .map(|_| (0..attributes).map(|_| r.random::<f64>() < density).collect())
        .collect();
    Context::from_matrix(incidence)
}

/// Complete tree of the given depth and branching factor. Nodes are named
/// `n0..` in breadth-first order (`n0` is the root); edges point child to
/// parent and are listed in a seeded order.
pub fn gen_tree(depth: usize, branching: usize, seed: u64) -> Result<Taxonomy> {
    if depth < 1 || branching < 1 {
        return Err(Error::invalid("depth and branching must be at least 1"));
    }
    let mut total: u128 = 1;
    let mut level: u128 = 1;
    for _ in 0..depth {
        level = level.saturating_mul(branching as u128);
        total = total.saturating_add(level);
        if total > MAX_TREE_NODES {
            return Err(Error::invalid(format!("tree would exceed {MAX_TREE_NODES} nodes")));
        }
    }
    let total = total as usize;
    let nodes: Vec<String> = (0..total).map(|i| format!("n{i}")).collect();
    let mut edges: Vec<(usize, usize)> = (1..total).map(|c| (c, (c - 1) / branching)).collect();
    edges.shuffle(&mut rng::stream(seed, Stream::Tree));
    Taxonomy::new(nodes, edges)
}

/// Sentences that each pick one topic and draw every token from that
/// topic's private vocabulary `t{topic}_w{j}`.
pub fn gen_topic_corpus(
    topics: usize,
    vocab_per_topic: usize,
    sentences: usize,
    sentence_len: usize,
    seed: u64,
) -> Result<Corpus> {
    if topics == 0 || vocab_per_topic == 0 || sentences == 0 || sentence_len == 0 {
        return Err(Error::invalid("corpus sizes must be at least 1"));
    }
    let mut r = rng::stream(seed, Stream::Corpus);
    Ok((0..sentences)
        .map(|_| {
            let t = r.random_range(0..topics);
            (0..sentence_len).map(|_| format!("t{t}_w{}", r.random_range(0..vocab_per_topic))).collect()
        })
        .collect())
}

/// Compositional corpus for analogy tests. Each target token `r{i}c{j}`
/// appears with context words drawn from a row pool `row{i}_k` and a column
/// pool `col{j}_k`, so a target's contexts factor into a row part and a
/// column part.
pub fn gen_analogy_corpus(
    rows: usize,
    cols: usize,
    pool: usize,
    sentences: usize,
    seed: u64,
) -> Result<Corpus> {
    if rows < 2 || cols < 2 || pool == 0 || sentences == 0 {
        return Err(Error::invalid("analogy corpus needs a grid of at least 2x2"));
    }
    let mut r = rng::stream(seed, Stream::Corpus);
    Ok((0..sentences)
        .map(|_| {
            let (i, j) = (r.random_range(0..rows), r.random_range(0..cols));
            let mut s = vec![
                format!("row{i}_{}", r.random_range(0..pool)),
                format!("col{j}_{}", r.random_range(0..pool)),
                format!("row{i}_{}", r.random_range(0..pool)),
                format!("col{j}_{}", r.random_range(0..pool)),
            ];
            s.shuffle(&mut r);
            s.insert(2, format!("r{i}c{j}"));
            s
        })
        .collect())
}

/// Isotropic Gaussian clusters, `per_cluster` points around each center.
pub fn gen_blobs(centers: &[Vec<f64>], per_cluster: usize, spread: f64, seed: u64) -> Result<PointSet> {
    if centers.is_empty() || per_cluster == 0 {
        return Err(Error::invalid("blobs need at least one center and one point"));
    }
    let normal = Normal::new(0.0, spread).map_err(|e| Error::invalid(e.to_string()))?;
    let mut r = rng::stream(seed, Stream::Blobs);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_cluster {
            points.push(center.iter().map(|x| x + normal.sample(&mut r)).collect());
            labels.push(format!("c{c}"));
        }
    }
    Ok(PointSet::new(points, Some(labels)))
}

/// Two interleaved half circles with Gaussian jitter.
pub fn gen_two_moons(n: usize, noise: f64, seed: u64) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::invalid("two moons need at least 2 points"));
    }
    let normal = Normal::new(0.0, noise).map_err(|e| Error::invalid(e.to_string()))?;
    let mut r = rng::stream(seed, Stream::Moons);
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let t = PI * r.random::<f64>();
        let (x, y, l) = if i % 2 == 0 { (t.cos(), t.sin(), "upper") } else { (1.0 - t.cos(), 0.5 - t.sin(), "lower") };
        points.push(vec![x + normal.sample(&mut r), y + normal.sample(&mut r)]);
        labels.push(l.to_owned());
    }
    Ok(PointSet::new(points, Some(labels)))
}

/// Points `(cos θ₁, sin θ₁, cos θ₂, sin θ₂)` on the `n1 × n2` grid of the
/// torus, with the grid coordinates `(k1, k2)` of each, so that
/// `θᵢ = 2π kᵢ / nᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusOrbits {
    pub n1: usize,
    pub n2: usize,
    pub points: Vec<Vec<f64>>,
    pub grid: Vec<(usize, usize)>,
}

impl TorusOrbits {
    pub fn embed(n1: usize, n2: usize, k1: usize, k2: usize) -> Vec<f64> {
        let t1 = 2.0 * PI * (k1 % n1) as f64 / n1 as f64;
        let t2 = 2.0 * PI * (k2 % n2) as f64 / n2 as f64;
        vec![t1.cos(), t1.sin(), t2.cos(), t2.sin()]
    }

    /// Angles `(θ₁, θ₂)` of each sample.
    pub fn angles(&self) -> Vec<Vec<f64>> {
        self.grid
            .iter()
            .map(|&(a, b)| vec![2.0 * PI * a as f64 / self.n1 as f64, 2.0 * PI * b as f64 / self.n2 as f64])
            .collect()
    }
}

/// `samples = None` emits the whole grid in row-major order; `Some(s)` draws
/// `s` grid points uniformly with replacement.
pub fn gen_torus_orbits(n1: usize, n2: usize, samples: Option<usize>, seed: u64) -> Result<TorusOrbits> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::invalid("torus grid needs n1, n2 >= 2"));
    }
    let grid: Vec<(usize, usize)> = match samples {
        None => (0..n1).flat_map(|a| (0..n2).map(move |b| (a, b))).collect(),
        Some(s) => {
            let mut r = rng::stream(seed, Stream::Torus);
            (0..s).map(|_| (r.random_range(0..n1), r.random_range(0..n2))).collect()
        }
    };
    let points = grid.iter().map(|&(a, b)| TorusOrbits::embed(n1, n2, a, b)).collect();
    Ok(TorusOrbits { n1, n2, points, grid })
}

/// Serializable description of one generator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorConfig {
    RandomContext { objects: usize, attributes: usize, density: f64, seed: u64 },
    TreeTaxonomy { depth: usize, branching: usize, seed: u64 },
    TopicCorpus { topics: usize, vocab_per_topic: usize, sentences: usize, sentence_len: usize, seed: u64 },
    AnalogyCorpus { rows: usize, cols: usize, pool: usize, sentences: usize, seed: u64 },
    Blobs { centers: Vec<Vec<f64>>, per_cluster: usize, spread: f64, seed: u64 },
    TwoMoons { n: usize, noise: f64, seed: u64 },
    TorusOrbits { n1: usize, n2: usize, samples: Option<usize>, seed: u64 },
}

/// Output of a [`GeneratorConfig`], renderable in its standard file format.
#[derive(Debug, Clone)]
pub enum Generated {
    Context(Context),
    Taxonomy(Taxonomy),
    Corpus(Corpus),
    Points(PointSet),
}

impl GeneratorConfig {
    pub fn generate(&self) -> Result<Generated> {
        Ok(match *self {
            GeneratorConfig::RandomContext { objects, attributes, density, seed } => {
                Generated::Context(gen_context(objects, attributes, density, seed)?)
            }
            GeneratorConfig::TreeTaxonomy { depth, branching, seed } => {
                Generated::Taxonomy(gen_tree(depth, branching, seed)?)
            }
            GeneratorConfig::TopicCorpus { topics, vocab_per_topic, sentences, sentence_len, seed } => {
                Generated::Corpus(gen_topic_corpus(topics, vocab_per_topic, sentences, sentence_len, seed)?)
            }
            GeneratorConfig::AnalogyCorpus { rows, cols, pool, sentences, seed } => {
                Generated::Corpus(gen_analogy_corpus(rows, cols, pool, sentences, seed)?)
            }
            GeneratorConfig::Blobs { ref centers, per_cluster, spread, seed } => {
                Generated::Points(gen_blobs(centers, per_cluster, spread, seed)?)
            }
            GeneratorConfig::TwoMoons { n, noise, seed } => Generated::Points(gen_two_moons(n, noise, seed)?),
            GeneratorConfig::TorusOrbits { n1, n2, samples, seed } => {
                let t = gen_torus_orbits(n1, n2, samples, seed)?;
                let labels = t.grid.iter().map(|(a, b)| format!("{a}:{b}")).collect();
                Generated::Points(PointSet::new(t.points, Some(labels)))
            }
        })
    }
}

impl Generated {
    /// CSV for contexts, taxonomies and points; one sentence per line for
    /// corpora.
    pub fn to_text(&self) -> String {
        match self {
            Generated::Context(c) => c.to_csv_string(),
            Generated::Taxonomy(t) => t.to_csv_string(),
            Generated::Corpus(c) => corpus_to_text(c),
            Generated::Points(p) => p.to_csv_string(),
        }
    }
}
