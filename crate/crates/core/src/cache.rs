//! On-disk cache of clique complexes and boundary matrices, plus an
//! append-only log of homology results.
//!
//! Each entry is a text file with a `.sha256` sidecar holding the hex digest
//! of its contents. An entry whose digest does not match, or that fails to
//! parse against the freshly built graph, is reported with a warning and
//! rebuilt.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use log::{debug, warn};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::graph::LabeledGraph;
use crate::matrix::SparseIntMatrix;
use crate::simplicial::{clique_complex_with_budget, CliqueComplex};
use crate::snf::Budget;

const FORMAT_VERSION: &str = "v1";

/// Whether a value came from disk, and the digest of its serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub hit: bool,
    pub sha256: String,
}

#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    log_lock: Mutex<()>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// File stem identifying a complex: kind, n, p, a, cap and format version.
/// Ground sets other than `{1..n}` get a digest of their labels appended.
pub fn complex_key(graph: &LabeledGraph, max_dim: usize) -> String {
    let mut key = format!(
        "{}-n{}-p{}-a{}-d{}-{FORMAT_VERSION}",
        graph.kind().name(),
        graph.n(),
        graph.p(),
        graph.a().unwrap_or(0),
        max_dim
    );
    let labels = graph.ground().labels();
    if labels.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
        let text: Vec<String> = labels.iter().map(u32::to_string).collect();
        key.push('-');
        key.push_str(&sha256_hex(text.join(",").as_bytes())[..12]);
    }
    key
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Cache {
            dir,
            log_lock: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn read_verified(&self, name: &str) -> Option<(String, String)> {
        let path = self.dir.join(name);
        let text = fs::read_to_string(&path).ok()?;
        let digest = sha256_hex(text.as_bytes());
        match fs::read_to_string(self.dir.join(format!("{name}.sha256"))) {
            Ok(recorded) if recorded.trim() == digest => Some((text, digest)),
            _ => {
                warn!(
                    "ignoring cache entry {} with a missing or mismatched digest",
                    path.display()
                );
                None
            }
        }
    }

    fn write_entry(&self, name: &str, text: &str) -> Result<String> {
        let digest = sha256_hex(text.as_bytes());
        for (file, body) in [
            (name.to_string(), text),
            (format!("{name}.sha256"), digest.as_str()),
        ] {
            let tmp = self.dir.join(format!("{file}.tmp"));
            fs::write(&tmp, body)?;
            fs::rename(&tmp, self.dir.join(&file))?;
        }
        Ok(digest)
    }

    /// Loads the complex for `graph` capped at `max_dim`, building and
    /// storing it if absent or corrupt.
    pub fn complex(
        &self,
        graph: Arc<LabeledGraph>,
        max_dim: usize,
        budget: Budget,
    ) -> Result<(CliqueComplex, Provenance)> {
        let name = format!("{}.complex", complex_key(&graph, max_dim));
        if let Some((text, sha256)) = self.read_verified(&name) {
            match CliqueComplex::from_text(graph.clone(), &text) {
                Ok(cx) if cx.max_dim() == max_dim => {
                    debug!("cache hit {name}");
                    return Ok((cx, Provenance { hit: true, sha256 }));
                }
                Ok(_) => warn!("cache entry {name} has the wrong dimension cap; rebuilding"),
                Err(e) => warn!("cache entry {name} is unreadable ({e}); rebuilding"),
            }
        }
        let cx = clique_complex_with_budget(graph, max_dim, budget)?;
        let sha256 = self.write_entry(&name, &cx.to_text())?;
        Ok((cx, Provenance { hit: false, sha256 }))
    }

    /// Loads or computes `∂_k` of `cx` (augmented when `reduced`).
    pub fn boundary(
        &self,
        cx: &CliqueComplex,
        k: usize,
        reduced: bool,
    ) -> Result<(SparseIntMatrix, Provenance)> {
        let tag = if reduced { "r" } else { "u" };
        let name = format!("{}.d{k}{tag}.matrix", complex_key(cx.graph(), cx.max_dim()));
        let rows = if k == 0 {
            usize::from(reduced)
        } else {
            cx.simplices(k - 1).len()
        };
        let cols = cx.simplices(k).len();
        if let Some((text, sha256)) = self.read_verified(&name) {
            match SparseIntMatrix::from_text(&text) {
                Ok(m) if m.n_rows() == rows && m.n_cols() == cols => {
                    return Ok((m, Provenance { hit: true, sha256 }));
                }
                Ok(_) => warn!("cache entry {name} has the wrong shape; rebuilding"),
                Err(e) => warn!("cache entry {name} is unreadable ({e}); rebuilding"),
            }
        }
        let m = cx.boundary_matrix(k, reduced)?;
        let sha256 = self.write_entry(&name, &m.to_text())?;
        Ok((m, Provenance { hit: false, sha256 }))
    }

    /// Appends one JSON line to `results.jsonl`. Writes are serialized.
    pub fn append_result(&self, record: &serde_json::Value) -> Result<()> {
        let _guard = self.log_lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.dir.join("results.jsonl"))?;
        writeln!(f, "{record}")?;
        Ok(())
    }

    pub fn results_path(&self) -> PathBuf {
        self.dir.join("results.jsonl")
    }
}
