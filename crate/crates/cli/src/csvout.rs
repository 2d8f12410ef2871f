//! Deterministic CSV assembly: metadata comment lines, a pinned header, and
//! full-precision rows. Identical configuration and seed produce identical
//! bytes.

use std::path::{Path, PathBuf};

use efas_core::{Error, Result};

use crate::config::RunConfig;

pub struct CsvWriter {
    lines: Vec<String>,
}

impl CsvWriter {
    pub fn new(cfg: &RunConfig, command: &str, header: &str) -> Self {
        let mut lines = Vec::new();
        lines.push(format!("# tool: efas-sim {}", env!("CARGO_PKG_VERSION")));
        lines.push(format!("# command: {command}"));
        lines.push(format!("# seed: {}", cfg.seed));
        lines.push(format!("# config: {}", cfg.metadata_line()));
        lines.push(header.to_string());
        CsvWriter { lines }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    /// Raw line (trailing summary tables and the like).
    pub fn line(&mut self, line: &str) {
        self.lines.push(line.to_string());
    }

    pub fn contents(&self) -> String {
        let mut text = self.lines.join("\n");
        text.push('\n');
        text
    }

    pub fn write(&self, dir: &Path, filename: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(filename);
        std::fs::write(&path, self.contents())
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Full-precision deterministic rendering of a float field.
pub fn num(x: f64) -> String {
    x.to_string()
}
