//! Single-writer emission of CSV tables, JSON sidecars and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::SimError;

/// Shortest round-trip representation, so identical values give identical bytes.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Written {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

pub struct OutputDir {
    dir: PathBuf,
    hash: String,
    written: Vec<Written>,
}

impl OutputDir {
    pub fn create(dir: &Path, config_hash: &str) -> Result<Self, SimError> {
        fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), hash: config_hash.to_string(), written: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[Written] {
        &self.written
    }

    /// Writes a CSV table preceded by a `# config_hash=...` comment line.
    pub fn csv<I>(&mut self, name: &str, columns: &[&str], rows: I) -> Result<(), SimError>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut text = format!("# config_hash={} tool=sim/{}\n", self.hash, env!("CARGO_PKG_VERSION"));
        text.push_str(&columns.join(","));
        text.push('\n');
        for row in rows {
            debug_assert_eq!(row.len(), columns.len());
            text.push_str(&row.join(","));
            text.push('\n');
        }
        self.put(name, text.into_bytes())
    }

    /// Writes pretty JSON with `config_hash` as the first key.
    pub fn json(&mut self, name: &str, body: Value) -> Result<(), SimError> {
        let mut map = serde_json::Map::new();
        map.insert("config_hash".into(), Value::String(self.hash.clone()));
        if let Value::Object(fields) = body {
            map.extend(fields);
        } else {
            map.insert("data".into(), body);
        }
        let mut text = serde_json::to_vec_pretty(&Value::Object(map)).expect("json serializes");
        text.push(b'\n');
        self.put(name, text)
    }

    fn put(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), SimError> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path).map_err(|e| SimError::io(&path, e))?;
        f.write_all(&bytes).map_err(|e| SimError::io(&path, e))?;
        self.written.push(Written {
            file: name.to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            bytes: bytes.len(),
        });
        Ok(())
    }
}
