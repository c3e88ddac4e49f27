use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::iot::TableFormat;

/// One input file. Files named `<series>_<year>.<ext>` carry a series id and
/// a year; any other stem is its own series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRef {
    pub path: PathBuf,
    pub stem: String,
    pub series: String,
    pub year: Option<u32>,
}

impl TableRef {
    pub fn from_path(path: &Path) -> Self {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (series, year) = match stem.rsplit_once('_') {
            Some((s, y)) if !s.is_empty() && !y.is_empty() && y.bytes().all(|b| b.is_ascii_digit()) => {
                (s.to_string(), y.parse().ok())
            }
            _ => (stem.clone(), None),
        };
        TableRef {
            path: path.to_path_buf(),
            stem,
            series,
            year,
        }
    }

}

/// Expands directories into their `.csv`/`.json` files (sorted, not
/// recursive). Every named path must exist.
pub fn discover(inputs: &[PathBuf], extensions: &[&str]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if !p.exists() {
            return Err(Error::NoSuchInput(p.clone()));
        }
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| Error::io(format!("listing {}", p.display()), e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|f| {
                    f.is_file()
                        && f.extension()
                            .and_then(|e| e.to_str())
                            .is_some_and(|e| extensions.contains(&e.to_ascii_lowercase().as_str()))
                })
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn table_format(path: &Path) -> Result<TableFormat> {
    TableFormat::from_path(path).ok_or_else(|| {
        Error::Format(format!(
            "{}: cannot infer format (expected .csv or .json)",
            path.display()
        ))
    })
}
