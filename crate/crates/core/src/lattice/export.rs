use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{bits_from_indices, build_lattice, ConceptLattice, Context, FormalConcept};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptRecord {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
}

/// Name-level serialization of a concept lattice: the JSON export format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub concepts: Vec<ConceptRecord>,
    /// Hasse edges as `[lower, upper]` concept indices.
    pub covers: Vec<[usize; 2]>,
    pub top: usize,
    pub bottom: usize,
}

impl LatticeDocument {
    pub fn new(ctx: &Context, lat: &ConceptLattice) -> Self {
        let names = |names: &[String], idx: Vec<usize>| idx.into_iter().map(|i| names[i].clone()).collect();
        let concepts = lat
            .concepts()
            .iter()
            .map(|c| ConceptRecord {
                extent: names(ctx.objects(), c.extent_indices()),
                intent: names(ctx.attributes(), c.intent_indices()),
            })
            .collect();
        LatticeDocument {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            concepts,
            covers: lat.covers().into_iter().map(|(a, b)| [a, b]).collect(),
            top: lat.top(),
            bottom: lat.bottom(),
        }
    }

    /// Rebuilds the lattice from the concept records. Covers, top and bottom
    /// are recomputed and must agree with the stored ones.
    pub fn to_lattice(&self) -> Result<ConceptLattice> {
        let lookup = |universe: &[String], names: &[String], what: &'static str| -> Result<_> {
            let idx = names
                .iter()
                .map(|n| {
                    universe
                        .iter()
                        .position(|u| u == n)
                        .ok_or_else(|| Error::invalid(format!("unknown {what} {n:?}")))
                })
                .collect::<Result<Vec<usize>>>()?;
            bits_from_indices(universe.len(), &idx, what)
        };
        let concepts = self
            .concepts
            .iter()
            .map(|r| {
                Ok(FormalConcept {
                    extent: lookup(&self.objects, &r.extent, "object")?,
                    intent: lookup(&self.attributes, &r.intent, "attribute")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let lat = build_lattice(concepts)?;
        let covers: Vec<[usize; 2]> = lat.covers().into_iter().map(|(a, b)| [a, b]).collect();
        if covers != self.covers || lat.top() != self.top || lat.bottom() != self.bottom {
            return Err(Error::invalid("stored cover relation does not match the concepts"));
        }
        Ok(lat)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Graphviz digraph of the Hasse diagram, edges pointing upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, c) in self.concepts.iter().enumerate() {
            let label = format!("{}|{}", c.extent.join(","), c.intent.join(","));
            let _ = writeln!(out, "  c{i} [label=\"{}\"];", escape(&label));
        }
        for [lo, hi] in &self.covers {
            let _ = writeln!(out, "  c{lo} -> c{hi};");
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
