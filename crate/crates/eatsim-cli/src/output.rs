//! Atomic artifact emission: every file is staged in a temporary sibling
//! and renamed into place, so a crash never leaves half-written output.

use eatsim::Result;
use std::io::Write;
use std::path::Path;

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| eatsim::Error::from(e.error))?;
    Ok(())
}

/// CSV built in memory, then written atomically.
pub struct CsvBuilder {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(header)
            .map_err(|e| eatsim::Error::validation(format!("csv: {e}")))?;
        Ok(CsvBuilder { writer })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer
            .write_record(fields)
            .map_err(|e| eatsim::Error::validation(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn save(self, path: &Path) -> Result<()> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| eatsim::Error::validation(format!("csv: {e}")))?;
        write_atomic(path, &bytes)
    }
}
