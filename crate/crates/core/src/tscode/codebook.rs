use rayon::prelude::*;

use super::codeword::{codeword_to_index, index_to_codeword, Codeword};
use super::ordering::{class_ordering, ClassOrdering};
use crate::counting::TypeClassTable;
use crate::graphs::{canonicalize, pair_count, LabeledGraph, Structure};
use crate::{Error, Result};

/// Largest `n` for which the exact codebook is built by default (1044
/// structures at `n = 7`).
pub const DEFAULT_MAX_EXACT: usize = 7;

/// Exact bijection between all structures on `n` vertices and the first
/// `total` binary strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    ordering: ClassOrdering,
    /// Structures with `j` edges in ascending canonical order, indexed by `j`.
    classes: Vec<Vec<Structure>>,
    /// First global index of each class in code order.
    starts: Vec<u64>,
}

/// Builds the codebook for `n`, refusing sizes above `max_exact`.
pub fn build_codebook(n: usize, max_exact: usize) -> Result<Codebook> {
    if n > max_exact {
        return Err(Error::Capacity { n, max: max_exact });
    }
    Codebook::build(n)
}

impl Codebook {
    /// Enumerates structures edge count by edge count: every structure with
    /// `j + 1` edges is some structure with `j` edges plus one edge.
    fn build(n: usize) -> Result<Self> {
        let m = pair_count(n);
        let mut classes = vec![vec![canonicalize(&LabeledGraph::empty(n)?)]];
        for j in 0..m {
            let mut next: Vec<Structure> = classes[j]
                .par_iter()
                .flat_map_iter(|s| {
                    let canon = s.canon();
                    (0..m).filter(|&i| !canon.pair(i)).map(move |i| {
                        let mut g = canon.clone();
                        g.set_pair(i, true);
                        canonicalize(&g)
                    })
                })
                .collect();
            next.sort_unstable_by(|a, b| a.canon().cmp(b.canon()));
            next.dedup_by(|a, b| a.canon() == b.canon());
            classes.push(next);
        }
        Self::from_classes(n, classes)
    }

    /// Assembles a codebook from per-class structure lists, checking them
    /// against the exact counts.
    pub(crate) fn from_classes(n: usize, classes: Vec<Vec<Structure>>) -> Result<Self> {
        let table = TypeClassTable::cached(n)?;
        let bad = |msg: String| Error::Cache(msg);
        if classes.len() != table.pair_count() + 1 {
            return Err(bad(format!("expected {} classes", table.pair_count() + 1)));
        }
        for (j, class) in classes.iter().enumerate() {
            if &num_bigint::BigUint::from(class.len()) != table.count(j)? {
                return Err(bad(format!(
                    "class j = {j} has {} structures, expected {}",
                    class.len(),
                    table.count(j)?
                )));
            }
            if class
                .iter()
                .any(|s| s.n() != n || s.edge_count() != j)
            {
                return Err(bad(format!("class j = {j} holds a foreign structure")));
            }
            if !class.windows(2).all(|w| w[0].canon() < w[1].canon()) {
                return Err(bad(format!("class j = {j} is not strictly ascending")));
            }
        }
        let ordering = class_ordering(&table);
        let starts = ordering.offsets()[..ordering.classes().len()]
            .iter()
            .map(|o| u64::try_from(o).expect("codebook sizes fit in u64"))
            .collect();
        Ok(Codebook {
            n,
            ordering,
            classes,
            starts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ordering(&self) -> &ClassOrdering {
        &self.ordering
    }

    /// Number of structures.
    pub fn total(&self) -> u64 {
        self.classes.iter().map(|c| c.len() as u64).sum()
    }

    /// Structures with `j` edges, ascending.
    pub fn class(&self, j: usize) -> &[Structure] {
        &self.classes[j]
    }

    fn start(&self, j: usize) -> u64 {
        self.starts[self.ordering.position(j)]
    }

    /// Position of `s` inside its class.
    pub fn rank_in_class(&self, s: &Structure) -> Result<u64> {
        self.check_n(s.n())?;
        let class = &self.classes[s.edge_count()];
        let rank = class
            .binary_search_by(|t| t.canon().cmp(s.canon()))
            .expect("census verified: every canonical structure is listed");
        Ok(rank as u64)
    }

    pub fn unrank_in_class(&self, j: usize, rank: u64) -> Result<&Structure> {
        let class = self.classes.get(j).ok_or(Error::EdgeCount {
            n: self.n,
            j,
            m: pair_count(self.n),
        })?;
        class.get(rank as usize).ok_or(Error::RankOutOfRange {
            j,
            rank,
            size: class.len() as u64,
        })
    }

    /// Global code index of `s`.
    pub fn index_of(&self, s: &Structure) -> Result<u64> {
        Ok(self.start(s.edge_count()) + self.rank_in_class(s)?)
    }

    /// Structure holding global index `index`.
    pub fn structure_at(&self, index: u64) -> Result<&Structure> {
        let total = self.total();
        if index >= total {
            return Err(Error::InvalidCodeword {
                index,
                n: self.n,
                total,
            });
        }
        let k = self.starts.partition_point(|&s| s <= index) - 1;
        let j = self.ordering.classes()[k].j;
        self.unrank_in_class(j, index - self.starts[k])
    }

    pub fn encode(&self, g: &LabeledGraph) -> Result<Codeword> {
        self.check_n(g.n())?;
        Ok(index_to_codeword(self.index_of(&canonicalize(g))?))
    }

    pub fn decode(&self, c: &Codeword) -> Result<Structure> {
        let index = codeword_to_index(c).map_err(|_| Error::InvalidCodeword {
            index: u64::MAX,
            n: self.n,
            total: self.total(),
        })?;
        self.structure_at(index).cloned()
    }

    /// Structures in code order.
    pub fn iter(&self) -> impl Iterator<Item = &Structure> + '_ {
        self.ordering
            .classes()
            .iter()
            .flat_map(move |c| self.classes[c.j].iter())
    }

    /// Code length of every structure in code order.
    pub fn code_lengths(&self) -> Vec<usize> {
        (0..self.total()).map(|i| (i + 1).ilog2() as usize).collect()
    }

    fn check_n(&self, found: usize) -> Result<()> {
        if found != self.n {
            return Err(Error::VertexMismatch {
                expected: self.n,
                found,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::exact_count;
    use crate::graphs::ErModel;
    use num_bigint::BigUint;
    use rand::seq::SliceRandom;
    use std::collections::HashSet;

    fn cb(n: usize) -> Codebook {
        build_codebook(n, DEFAULT_MAX_EXACT).unwrap()
    }

    #[test]
    fn four_vertex_codebook() {
        let book = cb(4);
        assert_eq!(book.total(), 11);
        assert_eq!(book.code_lengths(), vec![0, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3]);
        let k4 = LabeledGraph::complete(4).unwrap();
        let enc = |g: &LabeledGraph| book.encode(g).unwrap().to_string();
        assert_eq!(enc(&LabeledGraph::empty(4).unwrap()), "");
        assert_eq!(enc(&LabeledGraph::from_edges(4, &[(1, 3)]).unwrap()), "0");
        let mut five = k4.clone();
        five.set_pair(0, false);
        assert_eq!(enc(&five), "1");
        assert_eq!(enc(&k4), "00");
    }

    #[test]
    fn three_edge_class_order() {
        let book = cb(4);
        let triangle = LabeledGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let path = LabeledGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = LabeledGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        // Minimal vectors by hand: triangle 000|11|1, star 001|01|1,
        // path 001|10|1.
        let canons: Vec<String> = book.class(3).iter().map(|s| s.canon().to_string()).collect();
        assert_eq!(canons, ["000111", "001011", "001101"]);
        let rank = |g: &LabeledGraph| book.rank_in_class(&canonicalize(g)).unwrap();
        assert_eq!([rank(&triangle), rank(&star), rank(&path)], [0, 1, 2]);
        // The class occupies indices 8..=10.
        assert_eq!(book.encode(&triangle).unwrap().to_string(), "001");
        assert_eq!(book.encode(&star).unwrap().to_string(), "010");
        assert_eq!(book.encode(&path).unwrap().to_string(), "011");
    }

    #[test]
    fn two_vertex_codebook() {
        let book = cb(2);
        assert_eq!(book.total(), 2);
        assert_eq!(book.encode(&LabeledGraph::empty(2).unwrap()).unwrap().to_string(), "");
        assert_eq!(book.encode(&LabeledGraph::complete(2).unwrap()).unwrap().to_string(), "0");
    }

    #[test]
    fn census_matches_exact_counts() {
        for n in 1..=7 {
            let book = cb(n);
            for j in 0..=pair_count(n) {
                assert_eq!(BigUint::from(book.class(j).len()), exact_count(n, j).unwrap());
            }
        }
        assert_eq!(cb(6).total(), 156);
        assert_eq!(cb(7).total(), 1044);
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(build_codebook(8, 7), Err(Error::Capacity { n: 8, max: 7 })));
    }

    #[test]
    fn bijection_at_six_vertices() {
        let book = cb(6);
        let mut seen = HashSet::new();
        for (i, s) in book.iter().enumerate() {
            let c = book.encode(s.canon()).unwrap();
            assert_eq!(codeword_to_index(&c).unwrap(), i as u64);
            assert!(seen.insert(c.clone()));
            assert_eq!(&book.decode(&c).unwrap(), s);
            let r = book.rank_in_class(s).unwrap();
            assert_eq!(book.unrank_in_class(s.edge_count(), r).unwrap(), s);
        }
    }

    #[test]
    fn encode_is_isomorphism_invariant() {
        let book = cb(5);
        let model = ErModel::new(0.5, 17).unwrap();
        let mut rng = model.rng();
        for _ in 0..500 {
            let g = model.sample_with(5, &mut rng).unwrap();
            let mut sigma: Vec<usize> = (0..5).collect();
            sigma.shuffle(&mut rng);
            assert_eq!(book.encode(&g).unwrap(), book.encode(&g.permute(&sigma)).unwrap());
        }
    }

    #[test]
    fn smaller_classes_get_smaller_indices() {
        let book = cb(7);
        let table = TypeClassTable::cached(7).unwrap();
        let structures: Vec<&Structure> = book.iter().collect();
        for w in structures.windows(2) {
            assert!(table.count(w[0].edge_count()).unwrap() <= table.count(w[1].edge_count()).unwrap());
        }
    }

    #[test]
    fn decode_errors() {
        let book = cb(4);
        let err = book.decode(&index_to_codeword(11)).unwrap_err();
        assert!(matches!(err, Error::InvalidCodeword { index: 11, total: 11, .. }));
        assert!(book.decode(&Codeword::from_bits(vec![true; 70])).is_err());
        assert!(matches!(
            book.encode(&LabeledGraph::empty(5).unwrap()),
            Err(Error::VertexMismatch { .. })
        ));
        assert!(matches!(book.unrank_in_class(3, 3), Err(Error::RankOutOfRange { .. })));
        assert_eq!(book.unrank_in_class(0, 0).unwrap().edge_count(), 0);
    }
}
