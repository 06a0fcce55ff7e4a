use std::collections::HashMap;
use std::fmt::Write as _;

use crate::similarity::cosine_similarity;
use crate::{Error, Result};

/// Token → dense vector table.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpace {
    dim: usize,
    tokens: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

impl EmbeddingSpace {
    pub fn new(tokens: Vec<String>, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if tokens.len() != vectors.len() {
            return Err(Error::DimensionMismatch { expected: tokens.len(), got: vectors.len() });
        }
        let dim = vectors.first().map_or(0, Vec::len);
        let mut index = HashMap::with_capacity(tokens.len());
        for (i, (t, v)) in tokens.iter().zip(&vectors).enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::domain(format!("vector for {t:?} is not finite")));
            }
            if index.insert(t.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate token {t:?}")));
            }
        }
        Ok(EmbeddingSpace { dim, tokens, vectors, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn vector(&self, token: &str) -> Result<&[f64]> {
        self.index_of(token)
            .map(|i| self.vectors[i].as_slice())
            .ok_or_else(|| Error::invalid(format!("unknown token {token:?}")))
    }

    pub fn vector_at(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn cosine(&self, a: &str, b: &str) -> Result<f64> {
        cosine_similarity(self.vector(a)?, self.vector(b)?)
    }

    /// Vocabulary ranked by cosine to `query`, skipping `exclude`; ties
    /// break on token order in the table.
    pub fn nearest(&self, query: &[f64], exclude: &[&str], top_k: usize) -> Result<Vec<(String, f64)>> {
        if query.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: query.len() });
        }
        let mut scored = Vec::with_capacity(self.len());
        for (i, t) in self.tokens.iter().enumerate() {
            if exclude.contains(&t.as_str()) {
                continue;
            }
            // zero vectors have no direction; rank them last
            let s = cosine_similarity(query, &self.vectors[i]).unwrap_or(f64::NEG_INFINITY);
            scored.push((i, s));
        }
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        Ok(scored.into_iter().take(top_k).map(|(i, s)| (self.tokens[i].clone(), s)).collect())
    }

    /// One line per token: the token, then its coordinates, tab-separated.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (t, v) in self.tokens.iter().zip(&self.vectors) {
            out.push_str(t);
            for x in v {
                let _ = write!(out, "\t{x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let (tokens, vectors) = parse_tsv(text)?;
        EmbeddingSpace::new(tokens, vectors)
    }
}

pub(crate) fn parse_tsv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut tokens = Vec::new();
    let mut vectors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cells = line.split('\t');
        let token = cells.next().unwrap_or_default().to_owned();
        let v = cells
            .map(|c| c.trim().parse::<f64>().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad number {c:?}") }))
            .collect::<Result<Vec<f64>>>()?;
        tokens.push(token);
        vectors.push(v);
    }
    Ok((tokens, vectors))
}

/// Tokens ranked by cosine similarity to `v(b) − v(a) + v(c)`, excluding the
/// three query tokens ("a is to b as c is to ?").
pub fn analogy(space: &EmbeddingSpace, a: &str, b: &str, c: &str, top_k: usize) -> Result<Vec<(String, f64)>> {
    let (va, vb, vc) = (space.vector(a)?, space.vector(b)?, space.vector(c)?);
    let query: Vec<f64> = va.iter().zip(vb).zip(vc).map(|((a, b), c)| b - a + c).collect();
    space.nearest(&query, &[a, b, c], top_k)
}
