use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::{Error, Result};

type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Real-valued function on ℝⁿ, built from a small registry of named
/// primitives and closed under sums, products and scaling.
#[derive(Clone)]
pub enum ScalarField {
    /// `Σ xᵢ²`
    SquaredNorm,
    /// `xᵢ`
    Coordinate(usize),
    Constant(f64),
    Sum(Box<ScalarField>, Box<ScalarField>),
    Product(Box<ScalarField>, Box<ScalarField>),
    Scale(f64, Box<ScalarField>),
    Custom { name: String, dim: Option<usize>, f: FieldFn },
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::SquaredNorm => write!(f, "|x|^2"),
            ScalarField::Coordinate(i) => write!(f, "x{i}"),
            ScalarField::Constant(c) => write!(f, "{c}"),
            ScalarField::Sum(a, b) => write!(f, "({a:?} + {b:?})"),
            ScalarField::Product(a, b) => write!(f, "({a:?} * {b:?})"),
            ScalarField::Scale(c, a) => write!(f, "{c} * {a:?}"),
            ScalarField::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

impl ScalarField {
    /// Registry lookup: `sq-norm`, `circle` (x² + y² − 1), `x`, `y`,
    /// `xN` for coordinate N, `const:C`.
    pub fn builtin(name: &str) -> Result<Self> {
        Ok(match name {
            "sq-norm" => ScalarField::SquaredNorm,
            "circle" => ScalarField::SquaredNorm.plus(ScalarField::Constant(-1.0)),
            "x" => ScalarField::Coordinate(0),
            "y" => ScalarField::Coordinate(1),
            _ => {
                if let Some(c) = name.strip_prefix("const:") {
                    ScalarField::Constant(c.parse().map_err(|_| Error::invalid(format!("bad constant {c:?}")))?)
                } else if let Some(i) = name.strip_prefix('x').and_then(|i| i.parse().ok()) {
                    ScalarField::Coordinate(i)
                } else {
                    return Err(Error::invalid(format!("unknown function {name:?}")));
                }
            }
        })
    }

    pub fn custom(name: impl Into<String>, dim: Option<usize>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField::Custom { name: name.into(), dim, f: Arc::new(f) }
    }

    pub fn plus(self, other: ScalarField) -> Self {
        ScalarField::Sum(Box::new(self), Box::new(other))
    }

    pub fn times(self, other: ScalarField) -> Self {
        ScalarField::Product(Box::new(self), Box::new(other))
    }

    pub fn scaled(self, c: f64) -> Self {
        ScalarField::Scale(c, Box::new(self))
    }

    /// Smallest input dimension the function accepts, and an exact
    /// dimension when it requires one.
    fn dims(&self) -> (usize, Option<usize>) {
        match self {
            ScalarField::SquaredNorm | ScalarField::Constant(_) => (0, None),
            ScalarField::Coordinate(i) => (i + 1, None),
            ScalarField::Sum(a, b) | ScalarField::Product(a, b) => {
                let (la, ea) = a.dims();
                let (lb, eb) = b.dims();
                (la.max(lb), ea.or(eb))
            }
            ScalarField::Scale(_, a) => a.dims(),
            ScalarField::Custom { dim, .. } => (dim.unwrap_or(0), *dim),
        }
    }

    pub fn check_input(&self, x: &[f64]) -> Result<()> {
        let (least, exact) = self.dims();
        if let Some(d) = exact {
            if x.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: x.len() });
            }
        }
        if x.len() < least {
            return Err(Error::DimensionMismatch { expected: least, got: x.len() });
        }
        Ok(())
    }

    /// Unchecked evaluation; callers validate the dimension first.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ScalarField::SquaredNorm => x.iter().map(|v| v * v).sum(),
            ScalarField::Coordinate(i) => x[*i],
            ScalarField::Constant(c) => *c,
            ScalarField::Sum(a, b) => a.eval(x) + b.eval(x),
            ScalarField::Product(a, b) => a.eval(x) * b.eval(x),
            ScalarField::Scale(c, a) => c * a.eval(x),
            ScalarField::Custom { f, .. } => f(x),
        }
    }

    pub fn try_eval(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.eval(x))
    }
}

/// The concept `{x : |f(x) − r| ≤ τ}`.
#[derive(Debug, Clone)]
pub struct LevelSetConcept {
    pub f: ScalarField,
    pub level: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// `f(x) − r`
    pub residual: f64,
}

impl LevelSetConcept {
    pub fn new(f: ScalarField, level: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::invalid("tolerance must be positive and finite"));
        }
        if !level.is_finite() {
            return Err(Error::invalid("level must be finite"));
        }
        Ok(LevelSetConcept { f, level, tol })
    }

    pub fn membership(&self, x: &[f64]) -> Result<Membership> {
        let value = self.f.try_eval(x)?;
        if !value.is_finite() {
            return Err(Error::domain("function value is not finite"));
        }
        let residual = value - self.level;
        Ok(Membership { member: residual.abs() <= self.tol, residual })
    }
}
