//! Instance file parsers and canonical writers.

mod mknap;
mod qaplib;
mod roadnet;
mod tsplib;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::problems::{KnapsackInstance, ProblemError, QapInstance, RoadNetwork, TspInstance};

pub use mknap::{parse_orlib_mknap, write_orlib_mknap};
pub use qaplib::{parse_qaplib, parse_qaplib_solution, write_qaplib, QapSolution};
pub use roadnet::{parse_roadnet, write_roadnet};
pub use tsplib::{parse_tsplib, write_tsplib};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing header field {0}")]
    MissingHeaderField(&'static str),
    #[error("{what}: expected {expected} entries, found {got}")]
    DimensionMismatch { what: String, expected: usize, got: usize },
    #[error("unsupported edge weight type or format `{0}`")]
    UnsupportedEdgeWeightType(String),
    #[error("matrix truncated: expected {expected} entries, found {got}")]
    TruncatedMatrix { expected: usize, got: usize },
    #[error("non-numeric token `{token}`")]
    NonNumericToken { token: String },
    #[error("section {0} ends early")]
    TruncatedSection(String),
    #[error("{what}: header declares {expected}, file holds {got}")]
    CountMismatch { what: String, expected: usize, got: usize },
    #[error("edge references undeclared node `{0}`")]
    UnknownNodeReference(String),
    #[error("velocity {0} is not positive")]
    NonPositiveVelocity(f64),
    #[error("destination `{destination}` is unreachable from `{source_label}`")]
    Unreachable { source_label: String, destination: String },
    #[error("malformed line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cannot infer instance format from `{0}`")]
    UnknownFormat(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// File formats understood by [`load_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceFormat {
    Tsplib,
    Qaplib,
    OrlibMknap,
    Roadnet,
}

impl InstanceFormat {
    /// Format implied by a file extension: `.tsp`, `.dat`, `.txt`/`.mknap`,
    /// `.road`/`.roadnet`.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "tsp" => Some(Self::Tsplib),
            "dat" => Some(Self::Qaplib),
            "txt" | "mknap" => Some(Self::OrlibMknap),
            "road" | "roadnet" => Some(Self::Roadnet),
            _ => None,
        }
    }
}

impl fmt::Display for InstanceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Tsplib => "TSPLIB",
            Self::Qaplib => "QAPLIB",
            Self::OrlibMknap => "ORLIB_MKNAP",
            Self::Roadnet => "ROADNET",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Tsp(TspInstance),
    Qap(QapInstance),
    Knapsack(Vec<KnapsackInstance>),
    Road(RoadNetwork),
}

impl Instance {
    /// Short description used by `parse-check`.
    pub fn summary(&self) -> String {
        match self {
            Instance::Tsp(t) => format!("TSP {} n={} metric={}", t.name, t.n, t.metric.name()),
            Instance::Qap(q) => format!("QAP {} n={}", q.name, q.n),
            Instance::Knapsack(list) => list
                .iter()
                .map(|k| format!("knapsack {} m={} n={}", k.name, k.m, k.n))
                .collect::<Vec<_>>()
                .join("\n"),
            Instance::Road(r) => format!(
                "road network {} nodes={} edges={}",
                r.name,
                r.node_count(),
                r.edges.len()
            ),
        }
    }
}

/// A parsed file together with where it came from.
#[derive(Clone, Debug)]
pub struct InstanceFileRecord {
    pub path: PathBuf,
    pub format: InstanceFormat,
    pub checksum: String,
    pub payload: Instance,
}

/// SHA-256 of `bytes` as lowercase hex.
pub fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_instance(text: &str, format: InstanceFormat, name: &str) -> Result<Instance, IngestError> {
    Ok(match format {
        InstanceFormat::Tsplib => Instance::Tsp(parse_tsplib(text)?),
        InstanceFormat::Qaplib => Instance::Qap(parse_qaplib(text, name)?),
        InstanceFormat::OrlibMknap => Instance::Knapsack(parse_orlib_mknap(text, name)?),
        InstanceFormat::Roadnet => Instance::Road(parse_roadnet(text, name)?),
    })
}

/// Reads and parses a file, inferring its format from the extension unless
/// one is given.
pub fn load_instance(path: &Path, format: Option<InstanceFormat>) -> Result<InstanceFileRecord, IngestError> {
    let format = format
        .or_else(|| InstanceFormat::from_path(path))
        .ok_or_else(|| IngestError::UnknownFormat(path.display().to_string()))?;
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8_lossy(&bytes);
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance")
        .to_string();
    let payload = parse_instance(&text, format, &name)?;
    Ok(InstanceFileRecord {
        path: path.to_path_buf(),
        format,
        checksum: checksum(&bytes),
        payload,
    })
}

fn parse_f64(token: &str) -> Result<f64, IngestError> {
    token.parse().map_err(|_| IngestError::NonNumericToken {
        token: token.to_string(),
    })
}

fn parse_i64(token: &str) -> Result<i64, IngestError> {
    token.parse().map_err(|_| IngestError::NonNumericToken {
        token: token.to_string(),
    })
}

fn parse_usize(token: &str) -> Result<usize, IngestError> {
    token.parse().map_err(|_| IngestError::NonNumericToken {
        token: token.to_string(),
    })
}
