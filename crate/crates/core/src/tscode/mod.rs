//! The Type Size code for graph structures.
//!
//! Two structures share a type class iff they have the same number of
//! edges. Classes are listed from smallest to largest (ties by edge count),
//! structures inside a class by ascending canonical edge vector, and the
//! `i`-th structure in that list receives the `i`-th binary string.

pub mod cache;
mod codebook;
mod codeword;
mod ordering;
mod probability;

pub use codebook::{build_codebook, Codebook, DEFAULT_MAX_EXACT};
pub use codeword::{
    codeword_length, codeword_to_index, index_to_codeword, Codeword, EMPTY_SENTINEL,
};
pub use ordering::{class_ordering, ClassEntry, ClassOrdering};
pub use probability::{
    class_log_mass, class_masses, length_distribution, m_epsilon, structure_probability,
    LengthDistribution,
};
