//! Canonical forms up to isomorphism.
//!
//! The canonical representative of a graph is the lexicographically
//! smallest edge vector over all `n!` relabelings. Because pairs are ordered
//! row by row, the vector is decided row by row: the vertex placed at
//! position `r` fixes row `r`, and the positions after `r` only matter
//! through the cells of vertices that agree on adjacency to everything
//! placed so far. Inside a cell non-neighbours of the new vertex must come
//! first, otherwise row `r` is not minimal. The search therefore only
//! branches over vertices of the leading cell that produce the minimal row,
//! and every leaf reached with the minimal vector is one automorphism-coset
//! element, which gives `|Aut|` for free.

use num_bigint::BigUint;
use num_traits::One;

use super::{pair_count, row_start, LabeledGraph};

/// An isomorphism class of labeled graphs, held as its canonical
/// representative together with the number of labeled graphs in the class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    canon: LabeledGraph,
    edges: usize,
    labelings: BigUint,
}

impl Structure {
    pub(crate) fn from_parts(canon: LabeledGraph, labelings: BigUint) -> Self {
        Structure {
            edges: canon.edge_count(),
            canon,
            labelings,
        }
    }

    pub fn n(&self) -> usize {
        self.canon.n()
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.n())
    }

    /// Canonical edge vector.
    pub fn canon(&self) -> &LabeledGraph {
        &self.canon
    }

    /// Edge count `j`.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Number of labeled graphs isomorphic to this structure, `n!/|Aut|`.
    pub fn labelings(&self) -> &BigUint {
        &self.labelings
    }

    /// Size of the automorphism group.
    pub fn automorphisms(&self) -> BigUint {
        factorial(self.n()) / &self.labelings
    }
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Order {
    /// Rows so far equal the best rows found so far.
    Equal,
    /// Rows so far are already smaller than the best.
    Less,
}

struct Search<'a> {
    adj: &'a [u64],
    best: Vec<u64>,
    current: Vec<u64>,
    automorphisms: u64,
    generation: u64,
}

impl Search<'_> {
    /// Row `r` produced by placing `v`, the first cell's member, next: for
    /// each remaining cell its non-neighbours of `v` (zeros) then its
    /// neighbours (ones). Most significant bit is pair `(r, r + 1)`.
    fn row(&self, v: usize, cells: &[u64]) -> u64 {
        let mut row = 0u64;
        for (k, &cell) in cells.iter().enumerate() {
            let cell = if k == 0 { cell & !(1 << v) } else { cell };
            let size = cell.count_ones();
            if size == 0 {
                continue;
            }
            let ones = (self.adj[v] & cell).count_ones();
            row = (row << size) | ((1u64 << ones) - 1);
        }
        row
    }

    fn refine(&self, v: usize, cells: &[u64]) -> Vec<u64> {
        let mut next = Vec::with_capacity(cells.len() + 1);
        for (k, &cell) in cells.iter().enumerate() {
            let cell = if k == 0 { cell & !(1 << v) } else { cell };
            let apart = cell & !self.adj[v];
            let joined = cell & self.adj[v];
            if apart != 0 {
                next.push(apart);
            }
            if joined != 0 {
                next.push(joined);
            }
        }
        next
    }

    fn descend(&mut self, r: usize, cells: Vec<u64>, mut order: Order) {
        let Some(&first) = cells.first() else {
            if self.best.is_empty() || order == Order::Less {
                self.best.clone_from(&self.current);
                self.automorphisms = 1;
                self.generation += 1;
            } else {
                self.automorphisms += 1;
            }
            return;
        };

        let mut candidates = Vec::with_capacity(first.count_ones() as usize);
        let mut rest = first;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            candidates.push((self.row(v, &cells), v));
        }
        let minimal = candidates.iter().map(|&(row, _)| row).min().unwrap();

        if order == Order::Equal && !self.best.is_empty() {
            match minimal.cmp(&self.best[r]) {
                std::cmp::Ordering::Greater => return,
                std::cmp::Ordering::Less => order = Order::Less,
                std::cmp::Ordering::Equal => {}
            }
        }
        self.current[r] = minimal;

        for &(row, v) in &candidates {
            if row != minimal {
                continue;
            }
            let generation = self.generation;
            let refined = self.refine(v, &cells);
            self.descend(r + 1, refined, order);
            if self.generation != generation {
                // A leaf below replaced the best; our prefix is that prefix.
                order = Order::Equal;
            }
        }
    }
}

/// Canonical representative of `g`'s isomorphism class.
pub fn canonicalize(g: &LabeledGraph) -> Structure {
    let n = g.n();
    let adj = g.adjacency();
    let mut search = Search {
        adj: &adj,
        best: Vec::new(),
        current: vec![0; n],
        automorphisms: 0,
        generation: 0,
    };
    search.descend(0, vec![(1u64 << n) - 1], Order::Equal);

    let mut canon = LabeledGraph::empty(n).expect("n already validated");
    for (r, &row) in search.best.iter().enumerate() {
        let len = n - 1 - r;
        let start = row_start(r, n);
        for t in 0..len {
            if row >> (len - 1 - t) & 1 == 1 {
                canon.set_pair(start + t, true);
            }
        }
    }
    let labelings = factorial(n) / search.automorphisms;
    Structure::from_parts(canon, labelings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{pair_count, ErModel};
    use rand::seq::SliceRandom;
    use std::collections::BTreeSet;

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    prefix.push(v);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    fn all_graphs(n: usize) -> impl Iterator<Item = LabeledGraph> {
        let m = pair_count(n);
        (0u64..1 << m)
            .map(move |code| LabeledGraph::from_bits(n, (0..m).map(|i| code >> i & 1 == 1)).unwrap())
    }

    /// Minimum over every relabeling, and how many relabelings reach it.
    fn brute_force(g: &LabeledGraph, perms: &[Vec<usize>]) -> (LabeledGraph, usize) {
        let images: Vec<LabeledGraph> = perms.iter().map(|s| g.permute(s)).collect();
        let min = images.iter().min().unwrap().clone();
        let hits = images.iter().filter(|h| **h == min).count();
        (min, hits)
    }

    #[test]
    fn empty_graph_is_its_own_class() {
        for n in 1..=7 {
            let s = canonicalize(&LabeledGraph::empty(n).unwrap());
            assert_eq!(s.edge_count(), 0);
            assert_eq!(s.labelings(), &BigUint::one());
        }
    }

    #[test]
    fn single_edge_on_four_vertices() {
        let mut canons = BTreeSet::new();
        for u in 0..4 {
            for v in u + 1..4 {
                let s = canonicalize(&LabeledGraph::from_edges(4, &[(u, v)]).unwrap());
                assert_eq!(s.labelings(), &BigUint::from(6u32));
                canons.insert(s.canon().clone());
            }
        }
        assert_eq!(canons.len(), 1);
        // Minimal placement pushes the edge to the last pair.
        assert_eq!(canons.first().unwrap().to_string(), "000001");
    }

    #[test]
    fn triangle_plus_isolated_vertex() {
        let g = LabeledGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let s = canonicalize(&g);
        assert_eq!(s.labelings(), &BigUint::from(4u32));
        let copies: BTreeSet<_> = all_permutations(4).iter().map(|p| g.permute(p)).collect();
        assert_eq!(copies.len(), 4);
    }

    #[test]
    fn matches_brute_force_minimum_up_to_five_vertices() {
        for n in 1..=5 {
            let perms = all_permutations(n);
            for g in all_graphs(n) {
                let (min, hits) = brute_force(&g, &perms);
                let s = canonicalize(&g);
                assert_eq!(s.canon(), &min, "{g:?}");
                assert_eq!(s.automorphisms(), BigUint::from(hits));
            }
        }
    }

    #[test]
    fn invariant_under_every_relabeling_up_to_five_vertices() {
        for n in 1..=5 {
            let perms = all_permutations(n);
            for g in all_graphs(n) {
                let s = canonicalize(&g);
                for sigma in &perms {
                    assert_eq!(canonicalize(&g.permute(sigma)), s);
                }
            }
        }
    }

    #[test]
    fn invariant_under_random_relabelings_up_to_eight_vertices() {
        let model = ErModel::new(0.45, 11).unwrap();
        let mut rng = model.rng();
        for n in 6..=8 {
            for _ in 0..300 {
                let g = model.sample_with(n, &mut rng).unwrap();
                let s = canonicalize(&g);
                assert_eq!(canonicalize(s.canon()), s, "idempotence");
                let mut sigma: Vec<usize> = (0..n).collect();
                sigma.shuffle(&mut rng);
                assert_eq!(canonicalize(&g.permute(&sigma)), s);
            }
        }
    }

    #[test]
    fn brute_force_spot_checks_at_seven_vertices() {
        let perms = all_permutations(7);
        let model = ErModel::new(0.5, 3).unwrap();
        let mut rng = model.rng();
        let mut graphs = vec![
            LabeledGraph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0)])
                .unwrap(),
            LabeledGraph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (4, 5)]).unwrap(),
        ];
        graphs.extend((0..6).map(|_| model.sample_with(7, &mut rng).unwrap()));
        for g in graphs {
            let (min, hits) = brute_force(&g, &perms);
            let s = canonicalize(&g);
            assert_eq!(s.canon(), &min);
            assert_eq!(s.automorphisms(), BigUint::from(hits));
        }
    }

    #[test]
    fn labelings_sum_to_binomials() {
        use std::collections::BTreeMap;
        for n in 1..=6 {
            let m = pair_count(n);
            let mut classes: BTreeMap<LabeledGraph, Structure> = BTreeMap::new();
            for g in all_graphs(n) {
                let s = canonicalize(&g);
                classes.entry(s.canon().clone()).or_insert(s);
            }
            let mut per_j = vec![BigUint::default(); m + 1];
            for s in classes.values() {
                per_j[s.edge_count()] += s.labelings();
            }
            for (j, total) in per_j.iter().enumerate() {
                let binom = (0..j as u64).fold(BigUint::one(), |acc, i| acc * (m as u64 - i) / (i + 1));
                assert_eq!(total, &binom, "n={n} j={j}");
            }
        }
    }
}
