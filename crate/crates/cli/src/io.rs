use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use conceptkit::datasets::PointSet;
use tempfile::NamedTempFile;

use crate::Failure;

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    let mut tmp = NamedTempFile::new_in(&dir).map_err(|e| Failure::input(format!("cannot write in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.flush())
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

pub fn read_points(path: &Path, label_column: Option<&str>) -> Result<PointSet, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(PointSet::from_csv_reader(file, label_column)?)
}

pub fn parse_vector(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Failure::input(format!("bad number {t:?} in {s:?}"))))
        .collect()
}

/// `"1,2;3,4"` into rows.
pub fn parse_rows(s: &str) -> Result<Vec<Vec<f64>>, Failure> {
    s.split(';').map(parse_vector).collect()
}

pub fn parse_blocks(s: &str) -> Result<Vec<Vec<usize>>, Failure> {
    s.split(';')
        .map(|b| {
            b.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Failure::input(format!("bad index {t:?} in {s:?}"))))
                .collect()
        })
        .collect()
}

pub fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

pub fn loss_csv(history: &[f64]) -> String {
    let mut s = String::from("epoch,loss\n");
    for (i, l) in history.iter().enumerate() {
        s.push_str(&format!("{i},{l}\n"));
    }
    s
}
