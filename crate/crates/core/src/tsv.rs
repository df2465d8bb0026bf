//! Shared line reader for the tab-separated input formats.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

/// One non-blank, non-comment line split on tabs, with its 1-based line number.
pub(crate) struct Row {
    pub line: usize,
    pub fields: Vec<String>,
}

/// Reads `path` and returns every data row. Lines starting with `#` and blank
/// lines are skipped unless `keep_comments` is set.
pub(crate) fn read_rows(path: &Path, keep_comments: bool) -> Result<Vec<Row>> {
    let text = read_to_string(path)?;
    Ok(rows(&text, keep_comments))
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    let mut text = String::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    Ok(text)
}

pub(crate) fn rows(text: &str, keep_comments: bool) -> Vec<Row> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || (!keep_comments && trimmed.starts_with('#')) {
            continue;
        }
        rows.push(Row {
            line: i + 1,
            fields: trimmed.split('\t').map(|f| f.trim().to_string()).collect(),
        });
    }
    rows
}

impl Row {
    pub fn expect_fields(&self, path: &Path, n: usize) -> Result<()> {
        if self.fields.len() != n {
            return Err(Error::parse(
                path,
                self.line,
                format!("expected {n} tab-separated fields, found {}", self.fields.len()),
            ));
        }
        Ok(())
    }

    pub fn parse_f64(&self, path: &Path, idx: usize) -> Result<f64> {
        let raw = &self.fields[idx];
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(path, self.line, format!("not a finite number: `{raw}`")))
    }

    pub fn parse_usize(&self, path: &Path, idx: usize) -> Result<usize> {
        let raw = &self.fields[idx];
        raw.parse::<usize>()
            .map_err(|_| Error::parse(path, self.line, format!("not a non-negative integer: `{raw}`")))
    }
}
