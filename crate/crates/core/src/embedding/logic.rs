//! Negation and disjunction as subspace operations: `a NOT b` keeps the part
//! of `a` orthogonal to `b`, `a OR b` is the span of both.

use crate::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `a − (⟨a,b⟩/⟨b,b⟩) b`.
pub fn vector_not(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    let bb = dot(b, b);
    if bb == 0.0 {
        return Err(Error::domain("cannot negate against the zero vector"));
    }
    let c = dot(a, b) / bb;
    Ok(a.iter().zip(b).map(|(x, y)| x - c * y).collect())
}

/// Relative norm below which a Gram–Schmidt residual counts as dependent.
pub const DROP_TOLERANCE: f64 = 1e-10;

/// Orthonormal basis of a span.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vec<f64>>,
}

/// Span of `vectors` via modified Gram–Schmidt with one reorthogonalization
/// pass; inputs whose residual is below [`DROP_TOLERANCE`] of their own norm
/// are dropped as dependent.
pub fn vector_or(vectors: &[Vec<f64>]) -> Result<Subspace> {
    let dim = vectors.first().map(Vec::len).ok_or_else(|| Error::invalid("no vectors given"))?;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        let scale = norm(v);
        if scale == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&r);
        if n > DROP_TOLERANCE * scale {
            r.iter_mut().for_each(|x| *x /= n);
            basis.push(r);
        }
    }
    if basis.is_empty() {
        return Err(Error::domain("all input vectors are zero"));
    }
    Ok(Subspace { dim, basis })
}

impl Subspace {
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn project(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let mut p = vec![0.0; self.dim];
        for q in &self.basis {
            let c = dot(v, q);
            p.iter_mut().zip(q).for_each(|(x, y)| *x += c * y);
        }
        Ok(p)
    }

    /// `v` minus its projection: negation against the whole span.
    pub fn reject(&self, v: &[f64]) -> Result<Vec<f64>> {
        let p = self.project(v)?;
        Ok(v.iter().zip(&p).map(|(a, b)| a - b).collect())
    }

    /// Norm of the component of `v` outside the span.
    pub fn residual(&self, v: &[f64]) -> Result<f64> {
        Ok(norm(&self.reject(v)?))
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> Result<bool> {
        Ok(self.residual(v)? <= tol)
    }
}
