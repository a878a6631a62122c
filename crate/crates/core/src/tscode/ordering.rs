use num_bigint::BigUint;
use num_traits::Zero;
use sha2::{Digest, Sha256};

use crate::counting::TypeClassTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub j: usize,
    pub size: BigUint,
}

/// Type classes sorted by size, ties broken by edge count, with the global
/// index at which each class starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassOrdering {
    n: usize,
    classes: Vec<ClassEntry>,
    /// `offsets[k]` is the first index of `classes[k]`; the final entry is
    /// the total number of structures.
    offsets: Vec<BigUint>,
    /// `position[j]` is the place of class `j` in `classes`.
    position: Vec<usize>,
}

pub fn class_ordering(table: &TypeClassTable) -> ClassOrdering {
    let mut classes: Vec<ClassEntry> = table
        .counts()
        .iter()
        .enumerate()
        .map(|(j, size)| ClassEntry {
            j,
            size: size.clone(),
        })
        .collect();
    classes.sort_by(|a, b| a.size.cmp(&b.size).then(a.j.cmp(&b.j)));

    let mut offsets = Vec::with_capacity(classes.len() + 1);
    let mut running = BigUint::zero();
    offsets.push(running.clone());
    for c in &classes {
        running += &c.size;
        offsets.push(running.clone());
    }
    let mut position = vec![0; classes.len()];
    for (k, c) in classes.iter().enumerate() {
        position[c.j] = k;
    }
    ClassOrdering {
        n: table.n(),
        classes,
        offsets,
        position,
    }
}

impl ClassOrdering {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    pub fn offsets(&self) -> &[BigUint] {
        &self.offsets
    }

    /// Edge counts in code order.
    pub fn edge_counts(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.j).collect()
    }

    /// Position of class `j` in the ordering.
    pub fn position(&self, j: usize) -> usize {
        self.position[j]
    }

    /// First global index of class `j`.
    pub fn offset(&self, j: usize) -> &BigUint {
        &self.offsets[self.position[j]]
    }

    pub fn size(&self, j: usize) -> &BigUint {
        &self.classes[self.position[j]].size
    }

    pub fn total(&self) -> &BigUint {
        self.offsets.last().expect("offsets are never empty")
    }

    /// First eight bytes of a SHA-256 over `n` and the `(j, size)` sequence.
    pub fn checksum(&self) -> [u8; 8] {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_be_bytes());
        for c in &self.classes {
            h.update((c.j as u64).to_be_bytes());
            let bytes = c.size.to_bytes_be();
            h.update((bytes.len() as u64).to_be_bytes());
            h.update(&bytes);
        }
        let digest = h.finalize();
        let mut out = [0u8; 8];
        out.copy_from_slice(&digest[..8]);
        out
    }
}
