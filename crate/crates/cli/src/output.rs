use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Writes the artifacts of one run into the output directory. Every CSV
/// ends with `# seed=… version=… config_hash=…`.
pub struct Artifacts {
    dir: PathBuf,
    seed: u64,
    config_hash: String,
}

impl Artifacts {
    pub fn new(dir: &Path, seed: u64, config_bytes: &[u8]) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        let digest = Sha256::digest(config_bytes);
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            seed,
            config_hash: format!("{digest:x}"),
        })
    }

    pub fn trailer(&self) -> String {
        format!(
            "# seed={} version={} config_hash={}",
            self.seed,
            env!("CARGO_PKG_VERSION"),
            self.config_hash
        )
    }

    /// Writes `rows` under `header`, then any `notes` as comment lines and
    /// the metadata trailer. Returns the path written.
    pub fn csv(
        &self,
        name: &str,
        header: &[&str],
        rows: &[Vec<String>],
        notes: &[String],
    ) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        drop(w);
        let mut f = fs::OpenOptions::new().append(true).open(&path)?;
        for note in notes {
            writeln!(f, "# {note}")?;
        }
        writeln!(f, "{}", self.trailer())?;
        Ok(path)
    }

    pub fn text(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }
}

/// Shortest round-trip formatting, stable across runs.
pub fn num(x: f64) -> String {
    format!("{x}")
}
