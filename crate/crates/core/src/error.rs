use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex pair ({u}, {v}) for n = {n}")]
    InvalidPair { u: usize, v: usize, n: usize },

    #[error("pair index {index} out of range for n = {n}")]
    InvalidPairIndex { index: usize, n: usize },

    #[error("unsupported vertex count {n} (expected 1..={max})")]
    VertexCount { n: usize, max: usize },

    #[error("edge count {j} out of range for n = {n} (m = {m})")]
    EdgeCount { n: usize, j: usize, m: usize },

    #[error("degenerate type class: j = {j} with m = {m} (requires 0 < j < m)")]
    DegenerateClass { m: u64, j: u64 },

    #[error("{name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("graph6 parse error at byte {offset}: {message}")]
    Graph6 { offset: usize, message: String },

    #[error("codeword parse error at position {offset}: {message}")]
    Codeword { offset: usize, message: String },

    #[error("no exact codebook for n = {n} (limit is {max}); use length-only analysis")]
    Capacity { n: usize, max: usize },

    #[error("codeword index {index} is invalid for n = {n} ({total} structures)")]
    InvalidCodeword { index: u64, n: usize, total: u64 },

    #[error("graph has {found} vertices but the codebook is for n = {expected}")]
    VertexMismatch { expected: usize, found: usize },

    #[error("rank {rank} out of range for class j = {j} of size {size}")]
    RankOutOfRange { j: usize, rank: u64, size: u64 },

    #[error("regime error: {0}")]
    Regime(String),

    #[error("degenerate variance: standardisation requires p != 1/2")]
    DegenerateVariance,

    #[error("codebook cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
