//! CSV emission and the run manifest.
//!
//! Every data file starts with `#` lines echoing the configuration, the
//! rotor-image parameters and the conventions in force, then one column
//! header line, then rows. Floats are written with Rust's shortest
//! round-trip formatting so the files are exact and reproducible.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Conventions repeated in every header.
pub const CONVENTIONS: &[&str] = &[
    "sites are 1-based in all files; n0 is the kick minimum",
    "kick phase exp(-i(B_Q/2)(n-n0)^2) per flipped spin, applied after the free step",
    "U = kick * exp(-iT(H - E_ref)), E_ref the all-up energy; hopping amplitude -J/2",
    "standard map p' = p + K sin x, x' = x + p'; QKR kick exp(+i(K/tau)cos x), free step exp(-i tau l^2/2)",
    "images: K_s = J T B_Q, tau_s = B_Q, K_b = K_s/Delta, tau_b = 2 B_Q",
];

/// One CSV table held in memory until emission.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    /// File-specific `#` lines.
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    body: String,
    rows: usize,
}

impl OutputFile {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        OutputFile {
            name: name.into(),
            notes: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            body: String::new(),
            rows: 0,
        }
    }

    pub fn note(&mut self, line: impl Into<String>) -> &mut Self {
        self.notes.push(line.into());
        self
    }

    /// Appends one row of already formatted cells.
    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for c in cells {
            if !first {
                self.body.push(',');
            }
            self.body.push_str(c.as_ref());
            first = false;
        }
        self.body.push('\n');
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn body(&self) -> &str {
        &self.body
    }

    fn render(&self, header: &[String]) -> String {
        let mut s = String::with_capacity(self.body.len() + 1024);
        for h in header.iter().chain(&self.notes) {
            let _ = writeln!(s, "# {h}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        s.push_str(&self.body);
        s
    }
}

/// Full-precision float cell.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub rows: usize,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputManifest {
    pub code_version: String,
    pub experiment: String,
    /// Configuration keys in file order.
    pub config: Vec<(String, String)>,
    pub override_caps: bool,
    pub substitutions: Vec<String>,
    pub conventions: Vec<String>,
    /// Shared header lines (parameters and image dictionary).
    pub header: Vec<String>,
    pub files: Vec<FileEntry>,
}

impl OutputManifest {
    /// Recomputes every checksum from disk; returns the names that differ.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for f in &self.files {
            let path = dir.join(&f.name);
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            if sha256_hex(&bytes) != f.sha256 {
                bad.push(f.name.clone());
            }
        }
        Ok(bad)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes all files and `manifest.json` into `dir`, creating it if needed.
pub fn write_files(
    dir: &Path,
    files: &[OutputFile],
    mut manifest: OutputManifest,
) -> Result<OutputManifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut header = vec![format!(
        "{} experiment={}",
        manifest.code_version, manifest.experiment
    )];
    let echo: Vec<String> = manifest
        .config
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    header.push(format!("config: {}", echo.join(" ")));
    header.extend(manifest.header.iter().cloned());
    header.push(format!("override_caps={}", manifest.override_caps));
    header.extend(
        manifest
            .substitutions
            .iter()
            .map(|s| format!("substitution: {s}")),
    );
    header.extend(
        manifest
            .conventions
            .iter()
            .map(|c| format!("convention: {c}")),
    );
    manifest.files.clear();
    for f in files {
        let text = f.render(&header);
        let path: PathBuf = dir.join(&f.name);
        fs::write(&path, text.as_bytes()).map_err(|e| Error::io(&path, e))?;
        manifest.files.push(FileEntry {
            name: f.name.clone(),
            rows: f.rows,
            sha256: sha256_hex(text.as_bytes()),
        });
    }
    let path = dir.join("manifest.json");
    let mut json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
    json.push('\n');
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_checksums() {
        let dir = tempfile::tempdir().unwrap();
        let mut f = OutputFile::new("a.csv", &["period", "value"]);
        f.note("test file");
        f.row([1.to_string(), num(0.1)]);
        f.row([2.to_string(), num(1.0 / 3.0)]);
        let m = OutputManifest {
            code_version: "x".into(),
            experiment: "evolve".into(),
            config: vec![],
            override_caps: false,
            substitutions: vec![],
            conventions: vec![],
            header: vec!["N=8".into()],
            files: vec![],
        };
        let m = write_files(dir.path(), &[f], m).unwrap();
        assert_eq!(m.files[0].rows, 2);
        assert!(m.verify(dir.path()).unwrap().is_empty());
        let text = fs::read_to_string(dir.path().join("a.csv")).unwrap();
        assert!(text.contains("\n2,0.3333333333333333\n"));
        assert!(text.starts_with("# x experiment=evolve\n# config: \n# N=8\n"));
        let back: OutputManifest =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
                .unwrap();
        assert_eq!(back, m);
    }
}
