use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::{BoundCheckReport, Verdict};
use crate::analysis::bernoulli::BernoulliModel;
use crate::analysis::montecarlo::{run_sharded, DEFAULT_SHARDS};
use crate::analysis::normal::normal_cdf;
use crate::{Error, Result};

pub const BERRY_SCHEMA: &str = "tsgraph.berry/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerryRow {
    pub m: u64,
    /// Sampled `sup_z |F̂_m(z) − Φ(z)|`.
    pub deviation: f64,
    /// `deviation·√m`.
    pub scaled: f64,
    /// The same supremum for the exact law of the standardized sum.
    pub exact_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerryEsseenReport {
    pub schema: String,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub shards: usize,
    pub a: f64,
    pub rows: Vec<BerryRow>,
    pub max_scaled: f64,
    pub verdict: Verdict,
}

impl BerryEsseenReport {
    pub fn summary(&self) -> BoundCheckReport {
        let grid: Vec<u64> = self.rows.iter().map(|r| r.m).collect();
        BoundCheckReport::new("berry", self.max_scaled, self.a, 0.0)
            .param("p", self.p)
            .param("m_grid", grid)
            .param("trials", self.trials)
            .param("seed", self.seed)
            .param("shards", self.shards)
            .param("rows", &self.rows)
    }
}

/// The standardized sum `(Σ −log₂ p(xᵢ) − mH)/(σ√m)` as a function of the
/// number of ones `k`.
fn standardizer(m: u64, p: f64) -> Result<impl Fn(u64) -> f64> {
    let model = BernoulliModel::new(p)?;
    if model.varentropy == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let (one, zero) = (model.self_information(true), model.self_information(false));
    let scale = model.dispersion() * (m as f64).sqrt();
    let mean = m as f64 * model.entropy;
    Ok(move |k: u64| (k as f64 * one + (m - k) as f64 * zero - mean) / scale)
}

/// `sup_z |F(z) − Φ(z)|` for a distribution on the points `z(k)` with
/// weights `w[k]`. The supremum is attained at a jump, on one side or the
/// other.
fn sup_deviation(weights: &[f64], z: impl Fn(u64) -> f64) -> f64 {
    let total: f64 = weights.iter().sum();
    let mut points: Vec<(f64, f64)> = weights
        .iter()
        .enumerate()
        .map(|(k, &w)| (z(k as u64), w / total))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut below = 0.0;
    let mut sup: f64 = 0.0;
    for (zk, w) in points {
        let phi = normal_cdf(zk);
        let above = below + w;
        sup = sup.max((below - phi).abs()).max((above.min(1.0) - phi).abs());
        below = above;
    }
    sup
}

/// Exact Kolmogorov distance between the standardized sum of `m`
/// self-informations and the standard normal.
pub fn exact_deviation(m: u64, p: f64) -> Result<f64> {
    let z = standardizer(m, p)?;
    let ln_norm = libm::lgamma(m as f64 + 1.0);
    let pmf: Vec<f64> = (0..=m)
        .map(|k| {
            let (kf, cf) = (k as f64, (m - k) as f64);
            (ln_norm - libm::lgamma(kf + 1.0) - libm::lgamma(cf + 1.0) + kf * p.ln() + cf * (-p).ln_1p()).exp()
        })
        .collect();
    Ok(sup_deviation(&pmf, z))
}

/// Empirical `D_m·√m` for each blocklength in `m_grid`. Blocklength number
/// `i` uses seed `seed + i`.
pub fn berry_esseen_check(m_grid: &[u64], p: f64, trials: u64, seed: u64, a: f64) -> Result<BerryEsseenReport> {
    let mut rows = Vec::with_capacity(m_grid.len());
    for (i, &m) in m_grid.iter().enumerate() {
        let z = standardizer(m, p)?;
        let law = Binomial::new(m, p).map_err(|e| Error::Regime(format!("binomial({m}, {p}): {e}")))?;
        let shard_counts = run_sharded(seed.wrapping_add(i as u64), trials, DEFAULT_SHARDS, |rng, count| {
            let mut hist = vec![0u64; m as usize + 1];
            for _ in 0..count {
                hist[law.sample(rng) as usize] += 1;
            }
            hist
        });
        let mut hist = vec![0.0; m as usize + 1];
        for shard in shard_counts {
            for (h, c) in hist.iter_mut().zip(shard) {
                *h += c as f64;
            }
        }
        let deviation = sup_deviation(&hist, &z);
        rows.push(BerryRow {
            m,
            deviation,
            scaled: deviation * (m as f64).sqrt(),
            exact_deviation: exact_deviation(m, p)?,
        });
    }
    let max_scaled = rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
    Ok(BerryEsseenReport {
        schema: BERRY_SCHEMA.to_string(),
        p,
        trials,
        seed,
        shards: DEFAULT_SHARDS,
        a,
        rows,
        max_scaled,
        verdict: Verdict::from_bool(max_scaled <= a),
    })
}
