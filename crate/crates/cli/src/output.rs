//! Run directories: atomic file writes and a manifest of content hashes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use gft_symbolic::cancellation::sha256_hex;
use serde::Serialize;
use serde_json::Value;

pub const OUT_DIR_ENV: &str = "GFT_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "gft-out";

pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT_DIR), PathBuf::from)
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Serialize)]
struct FileEntry {
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a Value,
    files: &'a BTreeMap<String, FileEntry>,
}

/// Collects the files of one run; [`RunDir::finish`] writes `manifest.json`.
pub struct RunDir {
    dir: PathBuf,
    command: String,
    config: Value,
    files: BTreeMap<String, FileEntry>,
}

impl RunDir {
    pub fn new(dir: PathBuf, command: &str, config: Value) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            command: command.to_string(),
            config,
            files: BTreeMap::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> std::io::Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.files.insert(
            name.to_string(),
            FileEntry {
                bytes: contents.len(),
                sha256: sha256_hex(contents.as_bytes()),
            },
        );
        Ok(path)
    }

    pub fn finish(self) -> std::io::Result<PathBuf> {
        let m = Manifest {
            command: &self.command,
            config: &self.config,
            files: &self.files,
        };
        let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        text.push('\n');
        let path = self.dir.join("manifest.json");
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}
