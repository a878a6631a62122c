//! Type Size coding of unlabeled Erdős–Rényi graph structures.
//!
//! The crate is organised around four layers:
//!
//! * [`graphs`]: labeled graphs under a fixed pair ordering, Erdős–Rényi
//!   sampling, canonical forms up to isomorphism and graph6 I/O.
//! * [`counting`]: exact Pólya counts of structures per edge count, the
//!   Wright approximation and Stirling-based type-class size bounds.
//! * [`tscode`]: the Type Size code itself (class ordering, codebook,
//!   structure/codeword bijection, length distribution and `M(ε)`).
//! * [`analysis`]: ε-coding rates, the second-order rate bound and Monte
//!   Carlo validators for the concentration results the bound rests on.

pub mod analysis;
pub mod counting;
mod error;
pub mod numeric;
pub mod graphs;
pub mod tscode;

pub use error::{Error, Result};
