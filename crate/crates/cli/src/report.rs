//! Atomic report writers: each file is written to a temporary sibling and
//! renamed into place.

use std::io::Write;
use std::path::Path;

use serde_json::Value;
use tempfile::NamedTempFile;

fn temp_beside(path: &Path) -> std::io::Result<NamedTempFile> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    NamedTempFile::new_in(dir)
}

pub fn write_atomic(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut tmp = temp_beside(path)?;
    serde_json::to_writer_pretty(&mut tmp, value)?;
    tmp.write_all(b"\n")?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let tmp = temp_beside(path)?;
    let mut w = csv::Writer::from_writer(tmp);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let tmp = w.into_inner().map_err(|e| e.into_error())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
