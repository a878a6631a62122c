use serde::{Deserialize, Serialize};

use super::{BoundCheckReport, Verdict};
use crate::analysis::rate::{epsilon_rate_exact, theoretical_rate_bound};
use crate::tscode::build_codebook;
use crate::Result;

pub const RESIDUAL_SCHEMA: &str = "tsgraph.residual/v1";

/// Largest residual, in bits, accepted as "bounded".
pub const RESIDUAL_LIMIT_BITS: f64 = 8.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    /// `m·R̂_n(ε)`, the exact length threshold.
    pub k: usize,
    pub bound_bits: f64,
    /// `k − bound_bits`.
    pub residual_bits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub schema: String,
    pub rows: Vec<ResidualRow>,
    pub limit_bits: f64,
    pub max_residual: f64,
    /// Largest residual over the smaller half of the `n` range.
    pub max_lower_half: f64,
    /// Largest residual over the larger half.
    pub max_upper_half: f64,
    /// Every residual is at most the limit.
    pub bounded: bool,
    /// The larger half never exceeds the smaller half.
    pub non_growing: bool,
}

impl ResidualReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.bounded && self.non_growing)
    }

    pub fn summary(&self) -> BoundCheckReport {
        let mut report = BoundCheckReport::new("residual", self.max_residual, self.limit_bits, 0.0)
            .param("max_lower_half", self.max_lower_half)
            .param("max_upper_half", self.max_upper_half)
            .param("non_growing", self.non_growing)
            .param("rows", &self.rows);
        report.verdict = self.verdict();
        if !self.non_growing {
            report = report.note("residual grows over the n range");
        }
        report
    }
}

/// Measured gap between the exact length threshold and the explicit terms
/// of the second-order bound.
pub fn second_order_residuals(ns: &[usize], ps: &[f64], epsilons: &[f64], max_exact: usize) -> Result<ResidualReport> {
    let mut rows = Vec::new();
    for &n in ns {
        let cb = build_codebook(n, max_exact)?;
        for &p in ps {
            for &eps in epsilons {
                let k = epsilon_rate_exact(&cb, p, eps)?.k;
                let bound_bits = theoretical_rate_bound(n, p, eps)?.total_bits;
                rows.push(ResidualRow {
                    n,
                    p,
                    epsilon: eps,
                    k,
                    bound_bits,
                    residual_bits: k as f64 - bound_bits,
                });
            }
        }
    }
    let mut sorted: Vec<usize> = ns.to_vec();
    sorted.sort_unstable();
    let split = sorted.get(sorted.len() / 2).copied().unwrap_or(0);
    let max_of = |keep: &dyn Fn(usize) -> bool| {
        rows.iter()
            .filter(|r| keep(r.n))
            .map(|r| r.residual_bits)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let max_residual = max_of(&|_| true);
    let max_lower_half = max_of(&|n| n < split);
    let max_upper_half = max_of(&|n| n >= split);
    Ok(ResidualReport {
        schema: RESIDUAL_SCHEMA.to_string(),
        limit_bits: RESIDUAL_LIMIT_BITS,
        bounded: max_residual <= RESIDUAL_LIMIT_BITS,
        non_growing: max_upper_half <= max_lower_half,
        max_residual,
        max_lower_half,
        max_upper_half,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tscode::DEFAULT_MAX_EXACT;

    #[test]
    fn residual_rows() {
        let r = second_order_residuals(&[4, 5, 6, 7], &[0.2, 0.3], &[0.1, 0.25], DEFAULT_MAX_EXACT).unwrap();
        assert_eq!(r.rows.len(), 16);
        for row in &r.rows {
            println!("{row:?}");
            assert!((row.residual_bits - (row.k as f64 - row.bound_bits)).abs() < 1e-12);
        }
        assert!(r.bounded, "{r:?}");
    }
}
