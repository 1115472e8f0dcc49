//! `--cache` file: a JSON object mapping `"<eta bits hex>:<spec sha256>"` to
//! a stored force result.

use std::collections::BTreeMap;
use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use sha2::{Digest, Sha256};

use casimir_plate::quadrature::QuadratureSpec;
use casimir_plate::stress::ForceResult;

use crate::{usage, Failure};

pub fn spec_hash(spec: &QuadratureSpec) -> String {
    let canonical = serde_json::to_vec(spec).expect("spec serializes");
    Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    path: PathBuf,
    hash: String,
    entries: BTreeMap<String, ForceResult>,
    dirty: bool,
}

impl Cache {
    pub fn open(path: &Path, spec: &QuadratureSpec) -> Result<Cache, Failure> {
        let entries = match fs::read(path) {
            Ok(bytes) => serde_json::from_slice(&bytes)
                .map_err(|e| usage(format!("cache {} is not a valid cache file: {e}", path.display())))?,
            Err(e) if e.kind() == ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(usage(format!("cannot read cache {}: {e}", path.display()))),
        };
        Ok(Cache {
            path: path.to_owned(),
            hash: spec_hash(spec),
            entries,
            dirty: false,
        })
    }

    fn key(&self, eta: f64) -> String {
        format!("{:016x}:{}", eta.to_bits(), self.hash)
    }

    pub fn get(&self, eta: f64) -> Option<ForceResult> {
        self.entries.get(&self.key(eta)).copied()
    }

    pub fn insert(&mut self, r: ForceResult) {
        let key = self.key(r.eta);
        self.entries.insert(key, r);
        self.dirty = true;
    }

    pub fn save(&self) -> Result<(), Failure> {
        if !self.dirty {
            return Ok(());
        }
        let mut bytes = serde_json::to_vec_pretty(&self.entries).expect("cache serializes");
        bytes.push(b'\n');
        write_atomic(&self.path, &bytes).map_err(Failure::Numerical)
    }
}

/// Write to a temporary file next to `path`, then rename over it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}
