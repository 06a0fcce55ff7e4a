use std::collections::HashSet;
use std::io::Read;

use fixedbitset::FixedBitSet;

use super::bits_from_indices;
use crate::{Error, Result};

/// Binary incidence table between objects and attributes.
///
/// Rows and columns are both stored as packed bitsets so that either
/// derivation is a run of word-wise intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

impl Context {
    pub fn new(objects: Vec<String>, attributes: Vec<String>, incidence: Vec<Vec<bool>>) -> Result<Self> {
        check_unique(&objects, "object")?;
        check_unique(&attributes, "attribute")?;
        if incidence.len() != objects.len() {
            return Err(Error::DimensionMismatch { expected: objects.len(), got: incidence.len() });
        }
        let n = objects.len();
        let m = attributes.len();
        let mut rows = vec![FixedBitSet::with_capacity(m); n];
        let mut cols = vec![FixedBitSet::with_capacity(n); m];
        for (g, row) in incidence.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: row.len() });
            }
            for (a, &has) in row.iter().enumerate() {
                if has {
                    rows[g].insert(a);
                    cols[a].insert(g);
                }
            }
        }
        Ok(Context { objects, attributes, rows, cols })
    }

    /// Context with generated names `o0..` and `a0..`.
    pub fn from_matrix(incidence: Vec<Vec<bool>>) -> Result<Self> {
        let n = incidence.len();
        let m = incidence.first().map_or(0, Vec::len);
        let objects = (0..n).map(|i| format!("o{i}")).collect();
        let attributes = (0..m).map(|j| format!("a{j}")).collect();
        Self::new(objects, attributes, incidence)
    }

    /// Parses the CSV context format: the header row holds attribute names
    /// (its first cell is ignored), each further row an object name followed
    /// by `1`/`0` cells.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = rdr.records();
        let header = match records.next() {
            Some(r) => r.map_err(|e| csv_error(1, e))?,
            None => return Err(Error::Parse { line: 1, msg: "missing header row".into() }),
        };
        let attributes: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
        let mut objects = Vec::new();
        let mut incidence = Vec::new();
        for (i, rec) in records.enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| csv_error(line, e))?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            if rec.len() != attributes.len() + 1 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} cells, found {}", attributes.len() + 1, rec.len()),
                });
            }
            objects.push(rec[0].to_owned());
            let row = rec
                .iter()
                .skip(1)
                .map(|cell| match cell {
                    "1" => Ok(true),
                    "0" => Ok(false),
                    other => Err(Error::Parse { line, msg: format!("cell {other:?} is not 0 or 1") }),
                })
                .collect::<Result<Vec<bool>>>()?;
            incidence.push(row);
        }
        if objects.is_empty() {
            return Err(Error::Parse { line: 2, msg: "context has no object rows".into() });
        }
        Self::new(objects, attributes, incidence).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::Parse { line: 1, msg },
            other => other,
        })
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str("object");
        for a in &self.attributes {
            out.push(',');
            out.push_str(a);
        }
        out.push('\n');
        for (g, name) in self.objects.iter().enumerate() {
            out.push_str(name);
            for a in 0..self.attributes.len() {
                out.push_str(if self.rows[g].contains(a) { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn has(&self, object: usize, attribute: usize) -> bool {
        self.rows[object].contains(attribute)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    /// Attributes shared by every object of `extent` (all attributes when
    /// `extent` is empty).
    pub fn intent_of(&self, extent: &FixedBitSet) -> FixedBitSet {
        let mut intent = FixedBitSet::with_capacity(self.attribute_count());
        intent.insert_range(..);
        for g in extent.ones() {
            intent.intersect_with(&self.rows[g]);
        }
        intent
    }

    /// Objects having every attribute of `intent` (all objects when `intent`
    /// is empty).
    pub fn extent_of(&self, intent: &FixedBitSet) -> FixedBitSet {
        let mut extent = FixedBitSet::with_capacity(self.object_count());
        extent.insert_range(..);
        for a in intent.ones() {
            extent.intersect_with(&self.cols[a]);
        }
        extent
    }

    pub fn attribute_closure(&self, attrs: &FixedBitSet) -> FixedBitSet {
        self.intent_of(&self.extent_of(attrs))
    }

    pub fn object_closure(&self, objects: &FixedBitSet) -> FixedBitSet {
        self.extent_of(&self.intent_of(objects))
    }

    pub fn derive_intent(&self, extent: &[usize]) -> Result<Vec<usize>> {
        let set = bits_from_indices(self.object_count(), extent, "object")?;
        Ok(self.intent_of(&set).ones().collect())
    }

    pub fn derive_extent(&self, intent: &[usize]) -> Result<Vec<usize>> {
        let set = bits_from_indices(self.attribute_count(), intent, "attribute")?;
        Ok(self.extent_of(&set).ones().collect())
    }

    pub fn closure(&self, attrs: &[usize]) -> Result<Vec<usize>> {
        let set = bits_from_indices(self.attribute_count(), attrs, "attribute")?;
        Ok(self.attribute_closure(&set).ones().collect())
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::invalid(format!("duplicate {what} identifier {n:?}")));
        }
    }
    Ok(())
}

fn csv_error(line: usize, e: csv::Error) -> Error {
    let line = e.position().map_or(line, |p| p.line() as usize);
    Error::Parse { line, msg: e.to_string() }
}
