//! Structure probabilities under the Erdős–Rényi model, the code-length
//! distribution and the codeword budget `M(ε)`.

use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_traits::Zero;

use super::codebook::Codebook;
use crate::counting::{binomial, log2_big, TypeClassTable};
use crate::graphs::Structure;
use crate::numeric::compensated_sum;
use crate::{Error, Result};

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("p", p, "(0, 1)"))
    }
}

/// `L(S)·p^j·(1−p)^(m−j)`, evaluated in log space.
pub fn structure_probability(s: &Structure, p: f64) -> Result<f64> {
    check_p(p)?;
    let (j, m) = (s.edge_count() as f64, s.pair_count() as f64);
    let ln = log2_big(s.labelings()) * LN_2 + j * p.ln() + (m - j) * (-p).ln_1p();
    Ok(ln.exp())
}

/// Natural log of the probability that a graph has exactly `j` of `m`
/// possible edges.
pub fn class_log_mass(m: usize, j: usize, p: f64) -> f64 {
    log2_big(&binomial(m as u64, j as u64)) * LN_2 + j as f64 * p.ln() + (m - j) as f64 * (-p).ln_1p()
}

/// Probability of every type class, indexed by edge count.
pub fn class_masses(table: &TypeClassTable, p: f64) -> Result<Vec<f64>> {
    check_p(p)?;
    let m = table.pair_count();
    Ok((0..=m).map(|j| class_log_mass(m, j, p).exp()).collect())
}

/// Probability of each code length, indexed by length in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthDistribution {
    masses: Vec<f64>,
}

impl LengthDistribution {
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, k: usize) -> f64 {
        self.masses.get(k).copied().unwrap_or(0.0)
    }

    /// `P(ℓ ≥ k)`.
    pub fn tail(&self, k: usize) -> f64 {
        compensated_sum(self.masses.iter().skip(k).copied())
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.masses.iter().copied())
    }

    /// Smallest `k` with `P(ℓ ≥ k) ≤ ε`.
    pub fn threshold(&self, eps: f64) -> usize {
        (0..=self.masses.len())
            .find(|&k| self.tail(k) <= eps)
            .expect("the tail past the longest codeword is zero")
    }

    /// Smallest `k` with `P(ℓ > k) ≤ ε`.
    pub fn threshold_strict(&self, eps: f64) -> usize {
        self.threshold(eps).saturating_sub(1)
    }
}

pub fn length_distribution(cb: &Codebook, p: f64) -> Result<LengthDistribution> {
    let lengths = cb.code_lengths();
    let longest = lengths.last().copied().unwrap_or(0);
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); longest + 1];
    for (s, &len) in cb.iter().zip(&lengths) {
        buckets[len].push(structure_probability(s, p)?);
    }
    Ok(LengthDistribution {
        masses: buckets.into_iter().map(compensated_sum).collect(),
    })
}

/// `M(ε)`: the smallest class-size level whose overflow probability is at
/// most `ε`, and the sum of `|T_S|` over the structures at or below it,
/// i.e. `Σ N(n, j)²` over the included classes.
pub fn m_epsilon(table: &TypeClassTable, p: f64, eps: f64) -> Result<BigUint> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::domain("epsilon", eps, "[0, 1)"));
    }
    let masses = class_masses(table, p)?;
    let counts = table.counts();
    let mut levels: Vec<&BigUint> = counts.iter().collect();
    levels.sort();
    levels.dedup();
    for level in levels {
        let overflow = compensated_sum(
            counts
                .iter()
                .zip(&masses)
                .filter(|(size, _)| *size > level)
                .map(|(_, &mass)| mass),
        );
        if overflow <= eps {
            return Ok(counts
                .iter()
                .filter(|size| *size <= level)
                .fold(BigUint::zero(), |acc, size| acc + size * size));
        }
    }
    unreachable!("the largest level has zero overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{canonicalize, LabeledGraph};
    use crate::tscode::{build_codebook, DEFAULT_MAX_EXACT};

    #[test]
    fn four_vertex_probabilities() {
        let k4 = canonicalize(&LabeledGraph::complete(4).unwrap());
        assert!((structure_probability(&k4, 0.5).unwrap() - 1.0 / 64.0).abs() < 1e-15);
        let edge = canonicalize(&LabeledGraph::from_edges(4, &[(0, 1)]).unwrap());
        assert!((structure_probability(&edge, 0.5).unwrap() - 6.0 / 64.0).abs() < 1e-15);
        assert!(structure_probability(&edge, 1.0).is_err());
    }

    #[test]
    fn probabilities_are_normalised() {
        for n in 1..=7 {
            let cb = build_codebook(n, DEFAULT_MAX_EXACT).unwrap();
            for p in [0.3, 0.5, 0.9] {
                let total = compensated_sum(cb.iter().map(|s| structure_probability(s, p).unwrap()));
                assert!((total - 1.0).abs() < 1e-12, "n={n} p={p}: {total}");
            }
        }
    }

    #[test]
    fn four_vertex_length_distribution() {
        let cb = build_codebook(4, DEFAULT_MAX_EXACT).unwrap();
        let d = length_distribution(&cb, 0.5).unwrap();
        // Index blocks: {0} ∅; {1,2} j=1 (6/64), j=5 (6/64); {3..=6} K4 (1/64),
        // j=2 (15/64), first j=4 structure; {7..=10} second j=4 structure,
        // j=3 (20/64). The paw (12 labelings) precedes the 4-cycle (3) in
        // canonical order, so index 6 carries 12/64 and index 7 carries 3/64.
        let expected = [1.0, 12.0, 28.0, 23.0].map(|x| x / 64.0);
        for (k, e) in expected.iter().enumerate() {
            assert!((d.mass(k) - e).abs() < 1e-15, "length {k}");
        }
        assert!((d.total() - 1.0).abs() < 1e-15);
        let sparse = length_distribution(&cb, 1e-9).unwrap();
        assert!(sparse.mass(0) > 1.0 - 1e-7);
    }

    #[test]
    fn m_epsilon_examples() {
        let t = TypeClassTable::compute(4).unwrap();
        assert_eq!(m_epsilon(&t, 0.5, 0.0).unwrap(), BigUint::from(21u32));
        assert_eq!(m_epsilon(&t, 0.5, 0.32).unwrap(), BigUint::from(12u32));
        assert_eq!(m_epsilon(&t, 0.5, 0.2).unwrap(), BigUint::from(21u32));
        assert!(m_epsilon(&t, 0.5, -0.1).is_err());
        assert!(m_epsilon(&t, 0.5, 1.0).is_err());
    }

    #[test]
    fn class_masses_sum_to_one() {
        for n in [5, 12, 30] {
            let t = TypeClassTable::cached(n).unwrap();
            let total = compensated_sum(class_masses(&t, 0.3).unwrap());
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
