use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EmbeddingSpace;
use crate::datasets::Corpus;
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Token inventory ordered by descending frequency, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn build(corpus: &Corpus) -> Self {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for t in corpus.iter().flatten() {
            *counts.entry(t.as_str()).or_default() += 1;
        }
        let mut entries: Vec<(&str, u64)> = counts.into_iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        let tokens: Vec<String> = entries.iter().map(|(t, _)| (*t).to_owned()).collect();
        let index = tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { tokens, counts: entries.into_iter().map(|(_, c)| c).collect(), index }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SgnsConfig {
    pub dim: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub lr: f64,
    pub seed: u64,
}

impl Default for SgnsConfig {
    fn default() -> Self {
        SgnsConfig { dim: 16, window: 3, negatives: 5, epochs: 5, lr: 0.025, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct SgnsOutput {
    pub space: EmbeddingSpace,
    pub vocabulary: Vocabulary,
    /// Mean negative-sampling loss per (center, context) pair, per epoch.
    pub loss_history: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `−ln σ(x)`, stable for large |x|.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

/// Skip-gram with negative sampling, trained by plain SGD.
///
/// Windows never cross sentence boundaries and shrink to a random width in
/// `1..=window` per center word. Negatives come from the unigram
/// distribution raised to 0.75. The learning rate decays linearly to 1e-4 of
/// its initial value. Returns the input-side vectors.
pub fn train_sgns(corpus: &Corpus, cfg: &SgnsConfig) -> Result<SgnsOutput> {
    if corpus.iter().all(Vec::is_empty) {
        return Err(Error::invalid("empty corpus"));
    }
    if cfg.window < 1 {
        return Err(Error::invalid("window must be at least 1"));
    }
    if cfg.dim < 2 {
        return Err(Error::invalid("dim must be at least 2"));
    }
    if !(cfg.lr > 0.0) {
        return Err(Error::invalid("lr must be positive"));
    }
    let vocab = Vocabulary::build(corpus);
    if vocab.len() < 2 {
        return Err(Error::invalid("corpus needs at least two distinct tokens"));
    }
    let v = vocab.len();
    let dim = cfg.dim;
    let mut rng = rng::stream(cfg.seed, Stream::Sgns);

    let mut input: Vec<f64> = (0..v * dim).map(|_| (rng.random::<f64>() - 0.5) / dim as f64).collect();
    let mut output = vec![0.0f64; v * dim];
    let noise = WeightedIndex::new(vocab.counts().iter().map(|&c| (c as f64).powf(0.75)))
        .map_err(|e| Error::invalid(e.to_string()))?;

    let sentences: Vec<Vec<usize>> = corpus
        .iter()
        .map(|s| s.iter().map(|t| vocab.index_of(t).expect("token in vocabulary")).collect())
        .collect();
    let words: usize = sentences.iter().map(Vec::len).sum();
    let total_steps = (words * cfg.epochs).max(1) as f64;

    let mut grad = vec![0.0f64; dim];
    let mut loss_history = Vec::with_capacity(cfg.epochs);
    let mut step = 0usize;
    for _ in 0..cfg.epochs {
        let mut loss = 0.0;
        let mut pairs = 0usize;
        for sentence in &sentences {
            for (pos, &center) in sentence.iter().enumerate() {
                let lr = cfg.lr * (1.0 - step as f64 / total_steps).max(1e-4);
                step += 1;
                let span = rng.random_range(1..=cfg.window);
                let lo = pos.saturating_sub(span);
                let hi = (pos + span).min(sentence.len() - 1);
                for (cpos, &context) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
                    if cpos == pos {
                        continue;
                    }
                    let h = &mut input[center * dim..(center + 1) * dim];
                    grad.iter_mut().for_each(|g| *g = 0.0);
                    for n in 0..=cfg.negatives {
                        let (target, label) = if n == 0 {
                            (context, 1.0)
                        } else {
                            let t = noise.sample(&mut rng);
                            if t == context {
                                continue;
                            }
                            (t, 0.0)
                        };
                        let out = &mut output[target * dim..(target + 1) * dim];
                        let score: f64 = h.iter().zip(out.iter()).map(|(a, b)| a * b).sum();
                        loss += if label > 0.0 { neg_log_sigmoid(score) } else { neg_log_sigmoid(-score) };
                        let g = (label - sigmoid(score)) * lr;
                        for k in 0..dim {
                            grad[k] += g * out[k];
                            out[k] += g * h[k];
                        }
                    }
                    for k in 0..dim {
                        h[k] += grad[k];
                    }
                    pairs += 1;
                }
            }
        }
        let mean = if pairs > 0 { loss / pairs as f64 } else { 0.0 };
        if !mean.is_finite() {
            return Err(Error::Diverged { epoch: loss_history.len(), last_finite: loss_history.last().copied() });
        }
        loss_history.push(mean);
    }

    let vectors = input.chunks(dim).map(<[f64]>::to_vec).collect();
    let space = EmbeddingSpace::new(vocab.tokens().to_vec(), vectors)?;
    Ok(SgnsOutput { space, vocabulary: vocab, loss_history })
}
