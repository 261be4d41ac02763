//! JSON persistence, DOT export and run manifests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::trigraph::{EdgeColor, Trigraph};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

/// Compact JSON followed by a newline. All our types serialize in a fixed
/// order, so equal values give equal bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_text(path, &to_json(value))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| IoError::File {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Hex SHA-256 of a file's bytes.
pub fn sha256_file(path: &Path) -> Result<String, IoError> {
    let bytes = fs::read(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

/// Undirected DOT graph: every vertex on its own line, then edges in
/// lexicographic order, red ones marked `color=red`.
pub fn to_dot(g: &Trigraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {v};");
    }
    let mut edges: Vec<_> = g
        .black_edges()
        .into_iter()
        .map(|e| (e, EdgeColor::Black))
        .chain(g.red_edges().into_iter().map(|e| (e, EdgeColor::Red)))
        .collect();
    edges.sort_unstable_by_key(|&(e, _)| e);
    for ((a, b), c) in edges {
        match c {
            EdgeColor::Black => {
                let _ = writeln!(out, "  {a} -- {b};");
            }
            EdgeColor::Red => {
                let _ = writeln!(out, "  {a} -- {b} [color=red];");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Record of one command-line run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    /// SHA-256 of every input file, keyed by path.
    pub input_hashes: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
    pub tool_version: String,
    pub wall_time_secs: f64,
    /// Optional per-stage timings in seconds.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<String, f64>,
    pub exit_code: i32,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }

    pub fn param<T: Serialize>(&mut self, key: &str, value: T) {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn input(&mut self, path: &Path) -> Result<(), IoError> {
        let h = sha256_file(path)?;
        self.input_hashes.insert(path.display().to_string(), h);
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.output_paths.push(path.display().to_string());
    }
}
