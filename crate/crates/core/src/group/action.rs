use std::f64::consts::{FRAC_PI_4, TAU};
use std::fmt;
use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::spec::{angle_gap, Element, GroupSpec};
use crate::manifold::VaeModel;
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// How a group whose factors are cyclic or rotation groups acts on points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    /// Factor `i` rotates the plane of coordinates `(2i, 2i+1)`.
    Rotate,
    /// Factor `i` adds its angle to coordinate `i`, an angle in `[0, 2π)`.
    Shift,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupAction {
    pub group: GroupSpec,
    pub act: ActionKind,
}

/// Rotation angle of an element of a cyclic or rotation group.
pub(crate) fn element_angle(g: &GroupSpec, e: &Element) -> Result<f64> {
    match (g, e) {
        (GroupSpec::Cyclic { n }, Element::Finite(k)) if k < n => Ok(TAU * *k as f64 / *n as f64),
        (GroupSpec::Rotation { .. }, Element::Angle(a)) => Ok(*a),
        (GroupSpec::Cyclic { .. } | GroupSpec::Rotation { .. }, _) => {
            Err(Error::invalid(format!("element {e} does not belong to {g:?}")))
        }
        _ => Err(Error::invalid("only cyclic and rotation factors act geometrically")),
    }
}

/// One angle per factor.
fn factor_angles(g: &GroupSpec, e: &Element) -> Result<Vec<f64>> {
    match (g, e) {
        (GroupSpec::Product { factors }, Element::Tuple(parts)) if parts.len() == factors.len() => {
            factors.iter().zip(parts).map(|(f, p)| element_angle(f, p)).collect()
        }
        (GroupSpec::Product { .. }, _) => Err(Error::invalid(format!("element {e} does not belong to {g:?}"))),
        _ => Ok(vec![element_angle(g, e)?]),
    }
}

fn rotate_blocks(angles: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = x.to_vec();
    for (i, a) in angles.iter().enumerate() {
        if *a == 0.0 {
            continue;
        }
        let (s, c) = a.sin_cos();
        let (u, v) = (x[2 * i], x[2 * i + 1]);
        out[2 * i] = c * u - s * v;
        out[2 * i + 1] = s * u + c * v;
    }
    out
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl GroupAction {
    pub fn new(group: GroupSpec, act: ActionKind) -> Result<Self> {
        group.validate()?;
        for f in group.factors() {
            if !matches!(f, GroupSpec::Cyclic { .. } | GroupSpec::Rotation { .. }) {
                return Err(Error::invalid("actions need cyclic or rotation factors"));
            }
        }
        Ok(GroupAction { group, act })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: GroupAction = serde_json::from_str(s)?;
        GroupAction::new(raw.group, raw.act)
    }

    pub fn dim(&self) -> usize {
        let k = self.group.factors().len();
        match self.act {
            ActionKind::Rotate => 2 * k,
            ActionKind::Shift => k,
        }
    }

    pub fn metric(&self) -> RepMetric {
        match self.act {
            ActionKind::Rotate => RepMetric::Euclidean,
            ActionKind::Shift => RepMetric::Angular,
        }
    }

    pub fn apply(&self, g: &Element, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        let angles = factor_angles(&self.group, g)?;
        Ok(match self.act {
            ActionKind::Rotate => rotate_blocks(&angles, x),
            ActionKind::Shift => x
                .iter()
                .zip(&angles)
                .map(|(t, a)| if *a == 0.0 { *t } else { wrap(t + a) })
                .collect(),
        })
    }

    /// Seeded points: the cube `[-1, 1]ᵈ` for rotations, `[0, 2π)ᵈ` for
    /// angle shifts.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = stream(seed, Stream::Samples);
        let (lo, hi) = match self.act {
            ActionKind::Rotate => (-1.0, 1.0),
            ActionKind::Shift => (0.0, TAU),
        };
        (0..n).map(|_| (0..self.dim()).map(|_| rng.random_range(lo..hi)).collect()).collect()
    }
}

/// How representation vectors are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepMetric {
    Euclidean,
    /// Per-coordinate circular difference, then Euclidean.
    Angular,
}

impl RepMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let sq: f64 = match self {
            RepMetric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum(),
            RepMetric::Angular => a.iter().zip(b).map(|(x, y)| angle_gap(*x, *y).powi(2)).sum(),
        };
        sq.sqrt()
    }
}

type RepFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A deterministic map `φ` from points to representation vectors.
#[derive(Clone)]
pub struct RepresentationMap {
    pub name: String,
    /// Required input dimension, if any.
    pub input_dim: Option<usize>,
    pub metric: RepMetric,
    f: RepFn,
}

impl fmt::Debug for RepresentationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepresentationMap").field("name", &self.name).field("input_dim", &self.input_dim).finish()
    }
}

fn torus(x: &[f64]) -> Vec<f64> {
    let (s1, c1) = x[0].sin_cos();
    let (s2, c2) = x[1].sin_cos();
    vec![c1, s1, c2, s2]
}

impl RepresentationMap {
    pub fn new(
        name: impl Into<String>,
        input_dim: Option<usize>,
        metric: RepMetric,
        f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        RepresentationMap { name: name.into(), input_dim, metric, f: Arc::new(f) }
    }

    /// Built-ins: `identity`, `norm`, `squared-norm`, `polar-angle` (ℝ² →
    /// angle in `[0, 2π)`), `torus` (angles `(θ₁, θ₂)` → `(cos θ₁, sin θ₁,
    /// cos θ₂, sin θ₂)`), and `torus-mixed` (the torus features with a 45°
    /// rotation mixing coordinates 0 and 2).
    pub fn builtin(name: &str) -> Result<Self> {
        Ok(match name {
            "identity" => Self::new(name, None, RepMetric::Euclidean, |x| x.to_vec()),
            "norm" => Self::new(name, None, RepMetric::Euclidean, |x| vec![x.iter().map(|v| v * v).sum::<f64>().sqrt()]),
            "squared-norm" => Self::new(name, None, RepMetric::Euclidean, |x| vec![x.iter().map(|v| v * v).sum()]),
            "polar-angle" => Self::new(name, Some(2), RepMetric::Angular, |x| vec![wrap(x[1].atan2(x[0]))]),
            "torus" => Self::new(name, Some(2), RepMetric::Euclidean, torus),
            "torus-mixed" => Self::mixed_torus(FRAC_PI_4),
            _ => return Err(Error::invalid(format!("unknown representation map {name:?}"))),
        })
    }

    /// Torus features followed by a rotation by `alpha` in the plane of
    /// coordinates 0 and 2, which straddles the two factor blocks.
    pub fn mixed_torus(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self::new(format!("torus-mixed({alpha})"), Some(2), RepMetric::Euclidean, move |x| {
            let mut z = torus(x);
            let (a, b) = (z[0], z[2]);
            z[0] = c * a - s * b;
            z[2] = s * a + c * b;
            z
        })
    }

    /// The encoder mean of a VAE.
    pub fn vae_encoder(model: VaeModel) -> Self {
        let d = model.input_dim;
        Self::new("vae-encoder", Some(d), RepMetric::Euclidean, move |x| {
            model.encode(x).map(|(mu, _)| mu).unwrap_or_else(|_| vec![f64::NAN])
        })
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if let Some(d) = self.input_dim {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.len() });
            }
        }
        let out = (self.f)(x);
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("{} produced a non-finite value", self.name)));
        }
        Ok(out)
    }
}

/// The induced transformation `ψ(g)` of representation space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivariantAction {
    /// `ψ(g) = id`; equivariance then coincides with invariance.
    Identity,
    /// `g` rotates representation blocks exactly as it rotates points.
    Rotate,
    /// `g` adds its factor angles to representation coordinates, mod 2π.
    AngleAdd,
}

impl EquivariantAction {
    pub fn apply(&self, group: &GroupSpec, g: &Element, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            EquivariantAction::Identity => Ok(v.to_vec()),
            EquivariantAction::Rotate => {
                let angles = factor_angles(group, g)?;
                if v.len() != 2 * angles.len() {
                    return Err(Error::DimensionMismatch { expected: 2 * angles.len(), got: v.len() });
                }
                Ok(rotate_blocks(&angles, v))
            }
            EquivariantAction::AngleAdd => {
                let angles = factor_angles(group, g)?;
                if v.len() != angles.len() {
                    return Err(Error::DimensionMismatch { expected: angles.len(), got: v.len() });
                }
                Ok(v.iter().zip(&angles).map(|(t, a)| wrap(t + a)).collect())
            }
        }
    }
}
