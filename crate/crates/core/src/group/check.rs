use serde::Serialize;

use super::action::{EquivariantAction, GroupAction, RepMetric, RepresentationMap};
use super::spec::{Element, GroupSpec};
use crate::manifold::ScalarField;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub element: String,
    pub point: Vec<f64>,
    pub deviation: f64,
}

/// Outcome of a sampled commuting-diagram check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub tol: f64,
    pub samples: usize,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub worst: Option<Witness>,
}

#[derive(Default)]
struct Tally {
    samples: usize,
    sum: f64,
    worst: Option<Witness>,
}

impl Tally {
    fn add(&mut self, g: &Element, x: &[f64], deviation: f64) {
        self.samples += 1;
        self.sum += deviation;
        // NaN counts as worst
        let beats = match &self.worst {
            None => true,
            Some(w) => !(deviation <= w.deviation),
        };
        if beats {
            self.worst = Some(Witness { element: g.to_string(), point: x.to_vec(), deviation });
        }
    }

    fn finish(self, tol: f64) -> CheckReport {
        let max_deviation = self.worst.as_ref().map_or(0.0, |w| w.deviation);
        CheckReport {
            passed: max_deviation <= tol,
            tol,
            samples: self.samples,
            max_deviation,
            mean_deviation: if self.samples == 0 { 0.0 } else { self.sum / self.samples as f64 },
            worst: self.worst,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("tolerance must be positive and finite"))
    }
}

fn check_setup(action: &GroupAction, phi: &RepresentationMap, points: &[Vec<f64>], elements: &[Element]) -> Result<()> {
    if let Some(d) = phi.input_dim {
        if d != action.dim() {
            return Err(Error::DimensionMismatch { expected: action.dim(), got: d });
        }
    }
    if let Some(x) = points.iter().find(|x| x.len() != action.dim()) {
        return Err(Error::DimensionMismatch { expected: action.dim(), got: x.len() });
    }
    if points.is_empty() || elements.is_empty() {
        return Err(Error::invalid("need at least one point and one group element"));
    }
    Ok(())
}

/// Largest `d(φ(x), φ(g·x))` over all sampled pairs.
pub fn check_invariance(
    action: &GroupAction,
    phi: &RepresentationMap,
    points: &[Vec<f64>],
    elements: &[Element],
    tol: f64,
) -> Result<CheckReport> {
    check_equivariance(action, phi, EquivariantAction::Identity, points, elements, tol)
}

/// Largest `d(φ(g·x), ψ(g)(φ(x)))` over all sampled pairs.
pub fn check_equivariance(
    action: &GroupAction,
    phi: &RepresentationMap,
    psi: EquivariantAction,
    points: &[Vec<f64>],
    elements: &[Element],
    tol: f64,
) -> Result<CheckReport> {
    check_tol(tol)?;
    check_setup(action, phi, points, elements)?;
    let mut tally = Tally::default();
    for x in points {
        let fx = phi.apply(x)?;
        for g in elements {
            let fgx = phi.apply(&action.apply(g, x)?)?;
            let moved = psi.apply(&action.group, g, &fx)?;
            tally.add(g, x, phi.metric.distance(&fgx, &moved));
        }
    }
    Ok(tally.finish(tol))
}

/// `e·x = x` exactly and `(gh)·x = g·(h·x)` within `tol`, over all
/// element pairs.
pub fn check_action_laws(action: &GroupAction, points: &[Vec<f64>], elements: &[Element], tol: f64) -> Result<CheckReport> {
    check_tol(tol)?;
    let g = &action.group;
    let e = g.identity()?;
    let metric = action.metric();
    let mut tally = Tally::default();
    let mut identity_ok = true;
    for x in points {
        let ex = action.apply(&e, x)?;
        if ex != *x {
            identity_ok = false;
            tally.add(&e, x, metric.distance(&ex, x).max(f64::MIN_POSITIVE));
        }
        for a in elements {
            for b in elements {
                let lhs = action.apply(&g.compose(a, b)?, x)?;
                let rhs = action.apply(a, &action.apply(b, x)?)?;
                tally.add(&Element::Tuple(vec![a.clone(), b.clone()]), x, metric.distance(&lhs, &rhs));
            }
        }
    }
    let mut report = tally.finish(tol);
    report.passed &= identity_ok;
    Ok(report)
}

/// `ψ(e) = id` and `ψ(gh)(v) = ψ(g)(ψ(h)(v))` within `tol`.
pub fn check_homomorphism(
    psi: EquivariantAction,
    group: &GroupSpec,
    metric: RepMetric,
    vectors: &[Vec<f64>],
    elements: &[Element],
    tol: f64,
) -> Result<CheckReport> {
    check_tol(tol)?;
    let e = group.identity()?;
    let mut tally = Tally::default();
    for v in vectors {
        tally.add(&e, v, metric.distance(&psi.apply(group, &e, v)?, v));
        for a in elements {
            for b in elements {
                let lhs = psi.apply(group, &group.compose(a, b)?, v)?;
                let rhs = psi.apply(group, a, &psi.apply(group, b, v)?)?;
                tally.add(&Element::Tuple(vec![a.clone(), b.clone()]), v, metric.distance(&lhs, &rhs));
            }
        }
    }
    Ok(tally.finish(tol))
}

/// Splits representation coordinates into one block per group factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductDecomposition {
    blocks: Vec<Vec<usize>>,
}

impl ProductDecomposition {
    /// Blocks must be non-empty, disjoint, and cover `0..dim`.
    pub fn new(blocks: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        let mut seen = vec![false; dim];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::invalid("empty block"));
            }
            for &i in b {
                if i >= dim {
                    return Err(Error::IndexOutOfRange { what: "representation coordinate", index: i, len: dim });
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::invalid(format!("coordinate {i} appears in two blocks")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::invalid(format!("coordinate {i} is in no block")));
        }
        Ok(ProductDecomposition { blocks })
    }

    /// Consecutive blocks of the given sizes.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b: Vec<usize> = (start..start + s).collect();
                start += s;
                b
            })
            .collect();
        Self::new(blocks, start)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    pub factor: usize,
    /// Largest change outside the factor's own block.
    pub leakage: f64,
    /// Largest change inside the block over non-identity elements.
    pub block_change: f64,
    pub degenerate: bool,
    pub worst: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisentangleReport {
    pub passed: bool,
    pub tol: f64,
    pub factors: Vec<FactorReport>,
}

fn block_gap(metric: RepMetric, a: &[f64], b: &[f64], idx: &[usize]) -> f64 {
    let pa: Vec<f64> = idx.iter().map(|&i| a[i]).collect();
    let pb: Vec<f64> = idx.iter().map(|&i| b[i]).collect();
    metric.distance(&pa, &pb)
}

/// Checks that each factor `Gᵢ`, acting alone, moves only block `Zᵢ` of
/// the representation, and moves it for some non-identity element.
/// Factor elements come from [`GroupSpec::test_elements`].
pub fn check_disentangled(
    action: &GroupAction,
    phi: &RepresentationMap,
    decomp: &ProductDecomposition,
    points: &[Vec<f64>],
    budget: usize,
    seed: u64,
    tol: f64,
) -> Result<DisentangleReport> {
    check_tol(tol)?;
    let group = &action.group;
    let factors = group.factors();
    if factors.len() != decomp.blocks().len() {
        return Err(Error::DimensionMismatch { expected: factors.len(), got: decomp.blocks().len() });
    }
    let identity = group.identity()?;
    check_setup(action, phi, points, std::slice::from_ref(&identity))?;
    let reps: Vec<Vec<f64>> = points.iter().map(|x| phi.apply(x)).collect::<Result<_>>()?;
    if let Some(r) = reps.iter().find(|r| r.len() != decomp.dim()) {
        return Err(Error::DimensionMismatch { expected: decomp.dim(), got: r.len() });
    }
    let mut out = Vec::with_capacity(factors.len());
    for (i, factor) in factors.iter().enumerate() {
        let off: Vec<usize> = decomp.blocks().iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, b)| b.clone()).collect();
        let own = &decomp.blocks()[i];
        let mut leak = Tally::default();
        let mut change: f64 = 0.0;
        for gi in factor.test_elements(budget, seed.wrapping_add(i as u64)) {
            let g = match (&identity, group) {
                (Element::Tuple(parts), GroupSpec::Product { .. }) => {
                    let mut parts = parts.clone();
                    parts[i] = gi.clone();
                    Element::Tuple(parts)
                }
                _ => gi.clone(),
            };
            let trivial = factor.same(&gi, &factor.identity()?);
            for (x, fx) in points.iter().zip(&reps) {
                let fgx = phi.apply(&action.apply(&g, x)?)?;
                leak.add(&g, x, if off.is_empty() { 0.0 } else { block_gap(phi.metric, fx, &fgx, &off) });
                if !trivial {
                    change = change.max(block_gap(phi.metric, fx, &fgx, own));
                }
            }
        }
        let r = leak.finish(tol);
        out.push(FactorReport { factor: i, leakage: r.max_deviation, block_change: change, degenerate: !(change > tol), worst: r.worst });
    }
    let passed = out.iter().all(|f| f.leakage <= tol && !f.degenerate);
    Ok(DisentangleReport { passed, tol, factors: out })
}

/// Largest `|−y ∂f/∂x + x ∂f/∂y|` over the points, with partials from
/// central differences (step `1e-5`). Zero exactly when `f` is unchanged
/// by infinitesimal rotation about the origin.
pub fn lie_rotation_residual(f: &ScalarField, points: &[[f64; 2]]) -> Result<f64> {
    const H: f64 = 1e-5;
    f.check_input(&[0.0, 0.0])?;
    if points.is_empty() {
        return Err(Error::invalid("no points"));
    }
    let mut worst: f64 = 0.0;
    for &[x, y] in points {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid("non-finite point"));
        }
        let dx = (f.eval(&[x + H, y]) - f.eval(&[x - H, y])) / (2.0 * H);
        let dy = (f.eval(&[x, y + H]) - f.eval(&[x, y - H])) / (2.0 * H);
        let r = -y * dx + x * dy;
        if !r.is_finite() {
            return Err(Error::domain(format!("non-finite derivative estimate at ({x}, {y})")));
        }
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
