//! Labeled graphs, the pair ordering, Erdős–Rényi sampling and
//! canonical forms.
//!
//! A graph on `n` vertices is stored as its edge vector: bit `i` is set iff
//! the `i`-th vertex pair in row-major upper-triangular order is an edge.
//! Pairs are ordered `(0,1), (0,2), …, (0,n-1), (1,2), …, (n-2,n-1)`.

mod canon;
pub mod graph6;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use canon::{canonicalize, Structure};
pub use graph6::{parse_graph6, write_graph6};

/// Largest vertex count any graph in this crate can have. It matches the
/// graph6 short header and lets a vertex set fit in one `u64`.
pub const MAX_VERTICES: usize = 62;

/// `C(n, 2)`, the number of vertex pairs.
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of the unordered pair `{u, v}` in row-major upper-triangular order.
pub fn pair_index(u: usize, v: usize, n: usize) -> Result<usize> {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    if a == b || b >= n {
        return Err(Error::InvalidPair { u, v, n });
    }
    Ok(row_start(a, n) + (b - a - 1))
}

/// Inverse of [`pair_index`]: returns `(u, v)` with `u < v`.
pub fn pair_of(index: usize, n: usize) -> Result<(usize, usize)> {
    if index >= pair_count(n) {
        return Err(Error::InvalidPairIndex { index, n });
    }
    // Rows shrink by one each step, so a linear scan over at most n rows.
    let mut u = 0;
    while row_start(u + 1, n) <= index {
        u += 1;
    }
    Ok((u, u + 1 + index - row_start(u, n)))
}

#[inline]
fn row_start(u: usize, n: usize) -> usize {
    u * (2 * n - u - 1) / 2
}

/// A simple undirected graph on vertices `0..n`, stored as its packed edge
/// vector. Bit `i` of the vector lives in word `i / 64` at position
/// `63 - i % 64`, so comparing the word slices compares edge vectors
/// lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabeledGraph {
    n: usize,
    words: Vec<u64>,
}

impl LabeledGraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::VertexCount {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(LabeledGraph {
            n,
            words: vec![0; pair_count(n).div_ceil(64)],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Ok(Self::empty(n)?.complement())
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            g.set_pair(pair_index(u, v, n)?, true);
        }
        Ok(g)
    }

    /// Builds a graph from its edge vector given as booleans in pair order.
    pub fn from_bits<I: IntoIterator<Item = bool>>(n: usize, bits: I) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let m = g.pair_count();
        let mut count = 0;
        for (i, bit) in bits.into_iter().enumerate() {
            if i >= m {
                return Err(Error::InvalidPairIndex { index: i, n });
            }
            g.set_pair(i, bit);
            count += 1;
        }
        if count != m {
            return Err(Error::InvalidPairIndex { index: count, n });
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    /// Number of edges, `j`.
    pub fn edge_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn pair(&self, index: usize) -> bool {
        debug_assert!(index < self.pair_count());
        self.words[index / 64] >> (63 - index % 64) & 1 == 1
    }

    #[inline]
    pub fn set_pair(&mut self, index: usize, value: bool) {
        debug_assert!(index < self.pair_count());
        let mask = 1u64 << (63 - index % 64);
        if value {
            self.words[index / 64] |= mask;
        } else {
            self.words[index / 64] &= !mask;
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> Result<bool> {
        Ok(self.pair(pair_index(u, v, self.n)?))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let i = pair_index(u, v, self.n)?;
        self.set_pair(i, true);
        Ok(())
    }

    /// The edge vector in pair order.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.pair_count()).map(|i| self.pair(i))
    }

    /// Edges as `(u, v)` with `u < v`, in pair order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
            .enumerate()
            .filter(|&(i, _)| self.pair(i))
            .map(|(_, e)| e)
    }

    /// Packed edge-vector words (see the type docs for the bit layout).
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Neighbourhood of every vertex as a bit mask (`1 << v` for vertex `v`).
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for (u, v) in self.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency()
            .into_iter()
            .map(|a| a.count_ones() as usize)
            .collect()
    }

    /// Bitwise negation of the edge vector.
    pub fn complement(&self) -> Self {
        let m = self.pair_count();
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            let used = m - 64 * (m.saturating_sub(1) / 64);
            *last &= u64::MAX << (64 - used);
        }
        LabeledGraph { n: self.n, words }
    }

    /// Relabels vertex `v` as `sigma[v]`.
    ///
    /// # Panics
    ///
    /// Panics if `sigma` is not a permutation of `0..n`.
    pub fn permute(&self, sigma: &[usize]) -> Self {
        assert_eq!(sigma.len(), self.n, "permutation length mismatch");
        let mut seen = 0u64;
        for &s in sigma {
            assert!(s < self.n && seen >> s & 1 == 0, "not a permutation");
            seen |= 1 << s;
        }
        let mut g = LabeledGraph {
            n: self.n,
            words: vec![0; self.words.len()],
        };
        for (u, v) in self.edges() {
            let i = pair_index(sigma[u], sigma[v], self.n).expect("valid permuted pair");
            g.set_pair(i, true);
        }
        g
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph(n={}, ", self.n)?;
        fmt::Display::fmt(self, f)?;
        f.write_str(")")
    }
}

/// Writes the edge vector as a string of `0`/`1` in pair order.
impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.bits() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Erdős–Rényi edge model: every pair is an edge independently with
/// probability `p`. The seed fixes the sample stream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErModel {
    p: f64,
    seed: u64,
}

impl ErModel {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("p", p, "(0, 1)"));
        }
        Ok(ErModel { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A fresh generator for this model's seed.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Draws one graph from an existing generator.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<LabeledGraph> {
        let mut g = LabeledGraph::empty(n)?;
        for i in 0..g.pair_count() {
            if rng.random::<f64>() < self.p {
                g.set_pair(i, true);
            }
        }
        Ok(g)
    }

    /// Draws only the edge count of a graph, consuming the generator exactly
    /// as [`ErModel::sample_with`] would.
    pub fn sample_edge_count<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> usize {
        (0..pair_count(n))
            .filter(|_| rng.random::<f64>() < self.p)
            .count()
    }
}

/// Samples one graph on `n` vertices; the result depends only on `model`.
pub fn sample_er(model: &ErModel, n: usize) -> Result<LabeledGraph> {
    model.sample_with(n, &mut model.rng())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pair_index_examples() {
        assert_eq!(pair_index(0, 1, 4).unwrap(), 0);
        assert_eq!(pair_index(2, 3, 4).unwrap(), 5);
        assert_eq!(pair_index(0, 3, 4).unwrap(), 2);
        assert_eq!(pair_index(3, 0, 4).unwrap(), 2);
    }

    #[test]
    fn pair_index_matches_enumeration() {
        for n in 1..=12 {
            let mut idx = 0;
            for u in 0..n {
                for v in u + 1..n {
                    assert_eq!(pair_index(u, v, n).unwrap(), idx);
                    assert_eq!(pair_of(idx, n).unwrap(), (u, v));
                    idx += 1;
                }
            }
            assert_eq!(idx, pair_count(n));
            assert!(pair_of(idx, n).is_err());
        }
    }

    #[test]
    fn invalid_pairs() {
        assert!(matches!(pair_index(2, 2, 4), Err(Error::InvalidPair { .. })));
        assert!(matches!(pair_index(1, 4, 4), Err(Error::InvalidPair { .. })));
    }

    #[test]
    fn vertex_count_limits() {
        assert!(LabeledGraph::empty(0).is_err());
        assert!(LabeledGraph::empty(MAX_VERTICES + 1).is_err());
        assert_eq!(LabeledGraph::complete(MAX_VERTICES).unwrap().edge_count(), pair_count(62));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(
            LabeledGraph::empty(4).unwrap().complement(),
            LabeledGraph::complete(4).unwrap()
        );
        // n = 12 gives m = 66, so the last word is partially used.
        let g = LabeledGraph::complete(12).unwrap();
        assert_eq!(g.edge_count(), 66);
        assert_eq!(g.complement().edge_count(), 0);
    }

    #[test]
    fn degenerate_sampling_limits() {
        let low = ErModel::new(1e-300, 7).unwrap();
        assert_eq!(sample_er(&low, 5).unwrap().edge_count(), 0);
        let high = ErModel::new(1.0 - 1e-12, 7).unwrap();
        assert_eq!(sample_er(&high, 5).unwrap().edge_count(), 10);
        assert!(ErModel::new(0.0, 1).is_err());
        assert!(ErModel::new(1.0, 1).is_err());
    }

    #[test]
    fn sampling_is_seed_determined() {
        let model = ErModel::new(0.4, 99).unwrap();
        assert_eq!(sample_er(&model, 20).unwrap(), sample_er(&model, 20).unwrap());
        let other = ErModel::new(0.4, 100).unwrap();
        assert_ne!(sample_er(&model, 20).unwrap(), sample_er(&other, 20).unwrap());
    }

    #[test]
    fn edge_count_sampler_matches_graph_sampler() {
        let model = ErModel::new(0.3, 5).unwrap();
        let mut a = model.rng();
        let mut b = model.rng();
        for _ in 0..50 {
            let g = model.sample_with(9, &mut a).unwrap();
            assert_eq!(g.edge_count(), model.sample_edge_count(9, &mut b));
        }
    }

    #[test]
    fn sampled_edge_density() {
        let model = ErModel::new(0.5, 2024).unwrap();
        let mut rng = model.rng();
        let trials = 100_000;
        let m = pair_count(20);
        let total: usize = (0..trials)
            .map(|_| model.sample_edge_count(20, &mut rng))
            .sum();
        let mean = total as f64 / (trials as f64 * m as f64);
        assert!((mean - 0.5).abs() < 0.01, "mean density {mean}");
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = LabeledGraph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), pair_count(n))
                .prop_map(move |bits| LabeledGraph::from_bits(n, bits).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn complement_is_an_involution(g in arb_graph(14)) {
            let c = g.complement();
            prop_assert_eq!(c.edge_count(), g.pair_count() - g.edge_count());
            prop_assert_eq!(c.complement(), g);
        }

        #[test]
        fn permute_preserves_degree_multiset(g in arb_graph(9), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut sigma: Vec<usize> = (0..g.n()).collect();
            sigma.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let h = g.permute(&sigma);
            let mut a = g.degrees();
            let mut b = h.degrees();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
            prop_assert_eq!(h.edge_count(), g.edge_count());
        }
    }
}
