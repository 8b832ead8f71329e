use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use simgroup::series::load_csv;
use simgroup::{Column, TimeSeries};

use crate::error::{CliError, Context};

/// Parses a `--column` value: digits select a 1-based position, anything
/// else a header name.
pub fn parse_column(raw: &str) -> Column {
    raw.parse().map(Column::Position).unwrap_or_else(|_| Column::Name(raw.to_string()))
}

/// Loads one column of a CSV file.
///
/// Without an explicit column, single-column files use column 1 and wider
/// files column 2 (the first is taken as labels). Without an explicit
/// header flag, the first row is a header when its selected cell is not a
/// number.
pub fn load_series(path: &Path, column: Option<Column>, header: Option<bool>) -> Result<TimeSeries, CliError> {
    let context = || format!("loading {}", path.display());
    let text = std::fs::read_to_string(path)
        .map_err(|source| simgroup::Error::Io {
            path: path.to_path_buf(),
            source,
        })
        .context(context())?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let cells: Vec<&str> = first.split(',').map(str::trim).collect();
    let column = column.unwrap_or(Column::Position(if cells.len() > 1 { 2 } else { 1 }));
    let header = header.unwrap_or_else(|| match &column {
        Column::Name(_) => true,
        Column::Position(p) => cells
            .get(p.saturating_sub(1))
            .is_some_and(|c| c.parse::<f64>().is_err()),
    });
    load_csv(path, &column, header).context(context())
}

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let fail = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(fail)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut doc = serde_json::to_string_pretty(value)
        .map_err(simgroup::Error::from)
        .context("serializing output")?;
    doc.push('\n');
    write_atomic(path, doc.as_bytes())
}

pub fn output_dir(flag: Option<&Path>, configured: Option<PathBuf>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or(configured)
        .unwrap_or_else(|| PathBuf::from("out"))
}
