use std::io::Read;

use crate::{Error, Result};

/// Real-valued rows read from (or written to) a headed CSV file, with an
/// optional label column.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub columns: Vec<String>,
    pub points: Vec<Vec<f64>>,
    pub labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        PointSet { columns: (0..dim).map(|i| format!("x{i}")).collect(), points, labels }
    }

    /// Parses a CSV with a header row. `label_column`, when given, names the
    /// column holding class labels; every other column must be numeric.
    pub fn from_csv_reader<R: Read>(reader: R, label_column: Option<&str>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
        let label_idx = match label_column {
            Some(name) => Some(header.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("label column {name:?} not in header"),
            })?),
            None => None,
        };
        let columns: Vec<String> =
            header.iter().enumerate().filter(|(i, _)| Some(*i) != label_idx).map(|(_, h)| h.to_owned()).collect();
        let mut points = Vec::new();
        let mut labels = label_idx.map(|_| Vec::new());
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            let mut row = Vec::with_capacity(columns.len());
            for (j, cell) in rec.iter().enumerate() {
                if Some(j) == label_idx {
                    labels.as_mut().expect("label column").push(cell.to_owned());
                    continue;
                }
                let v: f64 = cell
                    .parse()
                    .map_err(|_| Error::Parse { line, msg: format!("cell {cell:?} is not a number") })?;
                if !v.is_finite() {
                    return Err(Error::Parse { line, msg: format!("non-finite value {cell:?}") });
                }
                row.push(v);
            }
            points.push(row);
        }
        if points.is_empty() {
            return Err(Error::Parse { line: 2, msg: "no data rows".into() });
        }
        Ok(PointSet { columns, points, labels })
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.columns.join(",");
        if self.labels.is_some() {
            out.push_str(",label");
        }
        out.push('\n');
        for (i, p) in self.points.iter().enumerate() {
            let cells: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            if let Some(labels) = &self.labels {
                out.push(',');
                out.push_str(&labels[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// Sentences of whitespace-separated tokens, one per line.
pub type Corpus = Vec<Vec<String>>;

pub fn corpus_from_text(text: &str) -> Corpus {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_owned).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn corpus_to_text(corpus: &Corpus) -> String {
    let mut out = String::new();
    for s in corpus {
        out.push_str(&s.join(" "));
        out.push('\n');
    }
    out
}
