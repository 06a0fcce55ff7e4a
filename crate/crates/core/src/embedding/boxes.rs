use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Taxonomy;
use crate::lattice::{ConceptLattice, Context, FixedBitSet};
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Axis-aligned box `[min, max]` with `min ≤ max` coordinate-wise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperBox {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl HyperBox {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<Self> {
        if min.len() != max.len() {
            return Err(Error::DimensionMismatch { expected: min.len(), got: max.len() });
        }
        if min.iter().zip(&max).any(|(a, b)| !(a <= b)) {
            return Err(Error::invalid("box corner min must not exceed max"));
        }
        Ok(HyperBox { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }
}

/// Relative weight of nesting violations against sibling overlap. Below 1 so
/// that overlapping siblings shrink and drag their children along, instead
/// of stalling where the two hinge forces cancel.
const CONTAINMENT_WEIGHT: f64 = 0.5;

fn same_dim(a: &HyperBox, b: &HyperBox) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(())
}

pub fn box_volume(b: &HyperBox) -> f64 {
    b.min.iter().zip(&b.max).map(|(lo, hi)| (hi - lo).max(0.0)).product()
}

/// Intersection; `None` when some coordinate interval is inverted.
pub fn box_meet(a: &HyperBox, b: &HyperBox) -> Result<Option<HyperBox>> {
    same_dim(a, b)?;
    let min: Vec<f64> = a.min.iter().zip(&b.min).map(|(x, y)| x.max(*y)).collect();
    let max: Vec<f64> = a.max.iter().zip(&b.max).map(|(x, y)| x.min(*y)).collect();
    if min.iter().zip(&max).any(|(lo, hi)| lo > hi) {
        return Ok(None);
    }
    Ok(Some(HyperBox { min, max }))
}

/// Smallest box containing both.
pub fn box_join(a: &HyperBox, b: &HyperBox) -> Result<HyperBox> {
    same_dim(a, b)?;
    Ok(HyperBox {
        min: a.min.iter().zip(&b.min).map(|(x, y)| x.min(*y)).collect(),
        max: a.max.iter().zip(&b.max).map(|(x, y)| x.max(*y)).collect(),
    })
}

/// Whether `outer ⊇ inner`.
pub fn box_contains(outer: &HyperBox, inner: &HyperBox) -> Result<bool> {
    same_dim(outer, inner)?;
    Ok((0..outer.dim()).all(|k| outer.min[k] <= inner.min[k] && inner.max[k] <= outer.max[k]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoxConfig {
    pub dim: usize,
    pub epochs: usize,
    pub lr: f64,
    /// Required clearance for containment and for separation.
    pub margin: f64,
    /// Side length below which boxes are pushed to grow.
    pub min_side: f64,
    pub seed: u64,
}

impl Default for BoxConfig {
    fn default() -> Self {
        BoxConfig { dim: 2, epochs: 500, lr: 0.01, margin: 0.02, min_side: 0.1, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxEmbedding {
    pub dim: usize,
    pub nodes: Vec<String>,
    pub boxes: Vec<HyperBox>,
}

#[derive(Debug, Clone)]
pub struct BoxOutput {
    pub embedding: BoxEmbedding,
    pub loss_history: Vec<f64>,
    /// Ancestor-containment accuracy of the random initialization.
    pub initial_accuracy: f64,
}

impl BoxEmbedding {
    /// Fraction of (descendant, ancestor) pairs whose boxes nest.
    pub fn containment_accuracy(&self, tax: &Taxonomy) -> f64 {
        let pairs = tax.ancestor_pairs();
        if pairs.is_empty() {
            return 1.0;
        }
        let hits = pairs
            .iter()
            .filter(|&&(d, a)| box_contains(&self.boxes[a], &self.boxes[d]).unwrap_or(false))
            .count();
        hits as f64 / pairs.len() as f64
    }

    /// Context whose objects are the leaves and whose attributes are all
    /// nodes; a leaf has attribute `n` when its box lies inside `n`'s box.
    pub fn containment_context(&self, tax: &Taxonomy) -> Result<Context> {
        let leaves = tax.leaves();
        let incidence = leaves
            .iter()
            .map(|&l| (0..self.boxes.len()).map(|n| box_contains(&self.boxes[n], &self.boxes[l])).collect())
            .collect::<Result<Vec<Vec<bool>>>>()?;
        Context::new(leaves.iter().map(|&l| self.nodes[l].clone()).collect(), self.nodes.clone(), incidence)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (name, b) in self.nodes.iter().zip(&self.boxes) {
            out.push_str(name);
            for v in b.min.iter().chain(&b.max) {
                out.push_str(&format!("\t{v}"));
            }
            out.push('\n');
        }
        out
    }

    /// Reads the TSV written by [`BoxEmbedding::to_tsv`]: name, then `dim`
    /// min coordinates, then `dim` max coordinates.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let (nodes, rows) = super::space::parse_tsv(text)?;
        let dim = rows.first().map_or(0, |r| r.len() / 2);
        let boxes = rows
            .into_iter()
            .map(|r| {
                if r.len() != 2 * dim {
                    return Err(Error::DimensionMismatch { expected: 2 * dim, got: r.len() });
                }
                HyperBox::new(r[..dim].to_vec(), r[dim..].to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoxEmbedding { dim, nodes, boxes })
    }
}

/// Pairs `(a, b)` of taxonomy nodes where `a ⪯ b` in the taxonomy disagrees
/// with the order of their attribute concepts in `lattice` (built from
/// `ctx`, whose attributes are the taxonomy nodes). Empty when the
/// taxonomy order-embeds into the lattice.
pub fn order_embedding_violations(tax: &Taxonomy, ctx: &Context, lattice: &ConceptLattice) -> Result<Vec<(usize, usize)>> {
    let concept_of = |node: usize| -> Result<usize> {
        let attr = ctx
            .attribute_index(&tax.nodes()[node])
            .ok_or_else(|| Error::invalid(format!("node {:?} is not an attribute", tax.nodes()[node])))?;
        let mut intent = FixedBitSet::with_capacity(ctx.attribute_count());
        intent.insert(attr);
        let extent = ctx.extent_of(&intent);
        lattice.find_by_extent(&extent).ok_or_else(|| Error::invalid("attribute concept missing from lattice"))
    };
    let mu = (0..tax.len()).map(concept_of).collect::<Result<Vec<usize>>>()?;
    let mut bad = Vec::new();
    for a in 0..tax.len() {
        for b in 0..tax.len() {
            if tax.is_below(a, b) != lattice.leq(mu[a], mu[b]) {
                bad.push((a, b));
            }
        }
    }
    Ok(bad)
}

/// Full-batch subgradient descent on hinge penalties over hard boxes:
/// every (descendant, ancestor) pair pays for each coordinate where the
/// descendant pokes out of the ancestor; every pair of incomparable
/// siblings pays for its overlap along the axis where it is easiest to
/// separate; every box pays for sides shorter than `min_side`. The step
/// size decays linearly to 5% of `lr`.
pub fn fit_boxes(tax: &Taxonomy, cfg: &BoxConfig) -> Result<BoxOutput> {
    if tax.is_empty() {
        return Err(Error::invalid("empty taxonomy"));
    }
    if cfg.dim < 1 || !(cfg.lr > 0.0) {
        return Err(Error::invalid("dim must be >= 1 and lr positive"));
    }
    let n = tax.len();
    let d = cfg.dim;
    let m = cfg.margin;
    let mut rng = rng::stream(cfg.seed, Stream::Boxes);
    let mut lo: Vec<f64> = Vec::with_capacity(n * d);
    let mut hi: Vec<f64> = Vec::with_capacity(n * d);
    for _ in 0..n * d {
        let a = rng.random_range(0.0..1.0);
        lo.push(a);
        hi.push(a + rng.random_range(cfg.min_side..3.0 * cfg.min_side));
    }
    let snapshot = |lo: &[f64], hi: &[f64]| BoxEmbedding {
        dim: d,
        nodes: tax.nodes().to_vec(),
        boxes: (0..n).map(|i| HyperBox { min: lo[i * d..(i + 1) * d].to_vec(), max: hi[i * d..(i + 1) * d].to_vec() }).collect(),
    };
    let initial_accuracy = snapshot(&lo, &hi).containment_accuracy(tax);

    let nested = tax.ancestor_pairs();
    let unrelated: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !tax.is_below(a, b) && !tax.is_below(b, a))
        // only maximal incomparable pairs (siblings, in a tree): nesting then
        // separates every other incomparable pair
        .filter(|&(a, b)| {
            tax.parents(a).iter().all(|&p| tax.is_below(b, p) || tax.is_below(p, b))
                && tax.parents(b).iter().all(|&p| tax.is_below(a, p) || tax.is_below(p, a))
        })
        .collect();

    let mut loss_history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let mut g_lo = vec![0.0; n * d];
        let mut g_hi = vec![0.0; n * d];
        let mut loss = 0.0;
        for &(c, p) in &nested {
            for k in 0..d {
                let (ci, pi) = (c * d + k, p * d + k);
                let below = lo[pi] - lo[ci] + m;
                if below > 0.0 {
                    loss += CONTAINMENT_WEIGHT * below;
                    g_lo[pi] += CONTAINMENT_WEIGHT;
                    g_lo[ci] -= CONTAINMENT_WEIGHT;
                }
                let above = hi[ci] - hi[pi] + m;
                if above > 0.0 {
                    loss += CONTAINMENT_WEIGHT * above;
                    g_hi[ci] += CONTAINMENT_WEIGHT;
                    g_hi[pi] -= CONTAINMENT_WEIGHT;
                }
            }
        }
        for &(a, b) in &unrelated {
            let (k, overlap) = (0..d)
                .map(|k| (k, hi[a * d + k].min(hi[b * d + k]) - lo[a * d + k].max(lo[b * d + k])))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("dim >= 1");
            if overlap + m > 0.0 {
                loss += overlap + m;
                let (ai, bi) = (a * d + k, b * d + k);
                if hi[ai] <= hi[bi] { g_hi[ai] += 1.0 } else { g_hi[bi] += 1.0 }
                if lo[ai] >= lo[bi] { g_lo[ai] -= 1.0 } else { g_lo[bi] -= 1.0 }
            }
        }
        for i in 0..n * d {
            let short = cfg.min_side - (hi[i] - lo[i]);
            if short > 0.0 {
                loss += short;
                g_hi[i] -= 1.0;
                g_lo[i] += 1.0;
            }
        }
        if !loss.is_finite() {
            return Err(Error::Diverged { epoch, last_finite: loss_history.last().copied() });
        }
        loss_history.push(loss);
        if loss == 0.0 {
            continue;
        }
        let lr = cfg.lr * (1.0 - epoch as f64 / cfg.epochs as f64).max(0.05);
        for i in 0..n * d {
            lo[i] -= lr * g_lo[i];
            hi[i] -= lr * g_hi[i];
            if lo[i] > hi[i] {
                let mid = 0.5 * (lo[i] + hi[i]);
                lo[i] = mid;
                hi[i] = mid;
            }
        }
    }
    Ok(BoxOutput { embedding: snapshot(&lo, &hi), loss_history, initial_accuracy })
}
