//! Flat-file artifact writers: CSV with '#' metadata headers, plus an
//! optional raw binary matrix format for large grids.
//!
//! CSV dialect: comma separator, '.' decimal point, '\n' line endings,
//! '#'-prefixed metadata lines before the column header. Numbers are written
//! in shortest round-trip scientific notation, so identical inputs produce
//! byte-identical files.

use ndarray::Array2;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::TweezerError;
use crate::runconfig::RunConfig;

/// Key/value metadata emitted as '# key: value' lines.
#[derive(Debug, Clone, Default)]
pub struct MetaHeader {
    entries: Vec<(String, String)>,
}

impl MetaHeader {
    pub fn new(tool: &str) -> Self {
        let mut h = Self::default();
        h.push("generator", format!("tweezersense {tool}"));
        h
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_config(&mut self, cfg: &RunConfig) -> &mut Self {
        self.push("config", cfg.to_json_line())
    }

    fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

/// Write a table: metadata header, column-name line, then one comma-joined
/// row per record.
pub fn write_csv(
    path: &Path,
    header: &MetaHeader,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), TweezerError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    header.write_to(&mut w)?;
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        let line: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Write a real matrix as CSV: one line per row (first index), values in
/// column order (second index).
pub fn write_matrix_csv(
    path: &Path,
    header: &MetaHeader,
    matrix: &Array2<f64>,
) -> Result<(), TweezerError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    header.write_to(&mut w)?;
    for row in matrix.rows() {
        let line: Vec<String> = row.iter().map(|&v| fmt(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Write a real matrix as little-endian f64 in row-major order, with a JSON
/// sidecar ('<path>.json') describing shape and metadata.
pub fn write_matrix_binary(
    path: &Path,
    header: &MetaHeader,
    matrix: &Array2<f64>,
) -> Result<PathBuf, TweezerError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    for v in matrix.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;

    let sidecar = path.with_extension("bin.json");
    let meta: serde_json::Map<String, serde_json::Value> = header
        .entries
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let doc = serde_json::json!({
        "dtype": "f64le",
        "order": "row-major",
        "shape": [matrix.nrows(), matrix.ncols()],
        "meta": meta,
    });
    fs::write(&sidecar, serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(sidecar)
}

/// Recover the run configuration embedded in an output's '# config:' line.
pub fn parse_embedded_config(path: &Path) -> Result<RunConfig, TweezerError> {
    let text = fs::read_to_string(path)?;
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("# config: ") {
            return RunConfig::from_json_str(rest);
        }
    }
    Err(TweezerError::InvalidConfig(format!(
        "no '# config:' metadata line in {}",
        path.display()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn csv_round_trips_the_config_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let cfg = RunConfig::default();
        let mut header = MetaHeader::new("test");
        header.push_config(&cfg);
        write_csv(
            &path,
            &header,
            &["a", "b"],
            &[vec![1.0, 2.0], vec![3.0, 4.5e-7]],
        )
        .unwrap();
        let back = parse_embedded_config(&path).unwrap();
        assert_eq!(back, cfg);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# generator: tweezersense test\n"));
        assert!(text.contains("a,b\n"));
        assert!(text.contains("4.5e-7"));
    }

    #[test]
    fn binary_matrix_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bin");
        let m = array![[1.0f64, 2.0], [3.0, 4.0]];
        let sidecar = write_matrix_binary(&path, &MetaHeader::new("test"), &m).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 4 * 8);
        assert_eq!(f64::from_le_bytes(bytes[8..16].try_into().unwrap()), 2.0);
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(sidecar).unwrap()).unwrap();
        assert_eq!(doc["shape"][0], 2);
        assert_eq!(doc["dtype"], "f64le");
    }
}
