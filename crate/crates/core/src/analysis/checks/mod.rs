//! Empirical and exact validators. Each returns a [`BoundCheckReport`]
//! comparing an observed statistic with the bound it should respect.

mod berry;
mod residual;
mod wright;

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use berry::{berry_esseen_check, exact_deviation, BerryEsseenReport, BerryRow, BERRY_SCHEMA};
pub use residual::{second_order_residuals, ResidualReport, ResidualRow, RESIDUAL_SCHEMA};
pub use wright::{wright_convergence_report, JRule, WrightReport, WrightRow, WRIGHT_SCHEMA};

use super::montecarlo::{count_events, DEFAULT_SHARDS};
use super::rate::{ceil_log2, epsilon_rate_exact, gamma_threshold};
use crate::counting::{stirling_lower, stirling_upper, BoundsConfig, TypeClassTable};
use crate::graphs::{pair_count, ErModel};
use crate::numeric::CompensatedSum;
use crate::tscode::{build_codebook, length_distribution, m_epsilon};
use crate::{Error, Result};

pub const VERIFY_SCHEMA: &str = "tsgraph.verify/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Outcome of one check: pass iff `observed ≤ bound + tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckReport {
    pub check: String,
    pub parameters: BTreeMap<String, Value>,
    pub observed: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundCheckReport {
    fn new(check: &str, observed: f64, bound: f64, tolerance: f64) -> Self {
        BoundCheckReport {
            check: check.to_string(),
            parameters: BTreeMap::new(),
            observed,
            bound,
            tolerance,
            verdict: Verdict::from_bool(observed <= bound + tolerance),
            notes: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }
}

/// Binomial standard error of a frequency.
fn std_error(freq: f64, trials: u64) -> f64 {
    (freq * (1.0 - freq) / trials as f64).sqrt()
}

/// Both readings of the Chernoff exponent for the lower edge-count tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffExponent {
    /// `p(δ₁ + (1−δ₁)ln(1−δ₁))`, which the derivation produces.
    pub corrected: f64,
    /// `−δ₁ − (1−δ₁)ln(1−δ₁)`, negative on all of `(0, 1)`.
    pub literal: f64,
}

pub fn chernoff_exponent(p: f64, delta1: f64) -> Result<ChernoffExponent> {
    if !(delta1 > 0.0 && delta1 < 1.0) {
        return Err(Error::domain("delta1", delta1, "(0, 1)"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "(0, 1)"));
    }
    let core = delta1 + (1.0 - delta1) * (-delta1).ln_1p();
    Ok(ChernoffExponent {
        corrected: p * core,
        literal: -core,
    })
}

/// Frequency of `j(S) ≤ (1−δ₁)·m·p` against `exp(−m·δ₂)`.
pub fn chernoff_check(n: usize, p: f64, delta1: f64, trials: u64, seed: u64) -> Result<BoundCheckReport> {
    let delta2 = chernoff_exponent(p, delta1)?;
    let model = ErModel::new(p, seed)?;
    let m = pair_count(n);
    let threshold = (1.0 - delta1) * m as f64 * p;
    let hits = count_events(seed, trials, DEFAULT_SHARDS, |rng| {
        model.sample_edge_count(n, rng) as f64 <= threshold
    });
    let freq = hits as f64 / trials as f64;
    let bound = (-(m as f64) * delta2.corrected).exp();
    let mut report = BoundCheckReport::new("chernoff", freq, bound, 3.0 * std_error(freq, trials))
        .param("n", n)
        .param("m", m)
        .param("p", p)
        .param("delta1", delta1)
        .param("trials", trials)
        .param("seed", seed)
        .param("shards", DEFAULT_SHARDS)
        .param("threshold", threshold)
        .param("tail_count", hits)
        .param("delta2_corrected", delta2.corrected)
        .param("delta2_literal", delta2.literal)
        .param("literal_negative", delta2.literal < 0.0);
    if delta2.literal < 0.0 {
        report = report.note(format!(
            "literal exponent delta2 = {:.4} is negative, so exp(-m*delta2) exceeds 1 and bounds nothing; verdict uses the corrected exponent",
            delta2.literal
        ));
    }
    Ok(report)
}

/// `log₂ C(m, j)` for `j = 0..=m`, accumulated from consecutive ratios.
fn log2_binomial_row(m: u64) -> Vec<f64> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut acc = CompensatedSum::new();
    row.push(0.0);
    for j in 0..m {
        acc.add(((m - j) as f64).log2() - ((j + 1) as f64).log2());
        row.push(acc.value());
    }
    row
}

/// Stirling sandwich over every `0 < j < m` for `m` on a grid up to
/// `m_max`, plus `random` pairs drawn with `m ≤ 10·m_max`.
pub fn stirling_check(m_max: u64, random: u64, seed: u64) -> Result<BoundCheckReport> {
    let mut grid: Vec<u64> = (2..=m_max.min(500)).collect();
    let mut m = 500;
    while m < m_max {
        m = (m + m / 8).min(m_max);
        grid.push(m);
    }
    let mut violations = 0u64;
    let mut evaluated = 0u64;
    let mut min_margin = f64::INFINITY;
    let mut check = |m: u64, j: u64, exact: f64| -> Result<()> {
        let (lo, hi) = (stirling_lower(m, j)?, stirling_upper(m, j)?);
        evaluated += 1;
        if !(lo <= exact && exact <= hi) {
            violations += 1;
        }
        min_margin = min_margin.min(exact - lo).min(hi - exact);
        Ok(())
    };
    for &m in &grid {
        let row = log2_binomial_row(m);
        for j in 1..m {
            check(m, j, row[j as usize])?;
        }
    }
    let mut rng = super::montecarlo::shard_rng(seed, 0);
    for _ in 0..random {
        let m = rng.random_range(2..=10 * m_max.max(2));
        let j = rng.random_range(1..m);
        let ln = libm::lgamma(m as f64 + 1.0) - libm::lgamma(j as f64 + 1.0) - libm::lgamma((m - j) as f64 + 1.0);
        check(m, j, ln / std::f64::consts::LN_2)?;
    }
    Ok(BoundCheckReport::new("stirling", violations as f64, 0.0, 0.0)
        .param("m_max", m_max)
        .param("grid_points", grid.len())
        .param("random_pairs", random)
        .param("seed", seed)
        .param("evaluated", evaluated)
        .param("min_margin_bits", min_margin))
}

/// `m·R_n(ε) ≤ ⌈log₂ M(ε)⌉` over a grid, exactly.
///
/// The verdict uses the rate with threshold `P(ℓ ≥ k) ≤ ε`. The count under
/// the strict threshold `P(ℓ > k) ≤ ε` is reported alongside: the two differ
/// by one bit exactly when `M(ε)` is a power of two and every codeword up to
/// `M(ε)` is needed.
pub fn budget_check(ns: &[usize], ps: &[f64], epsilons: &[f64], max_exact: usize) -> Result<BoundCheckReport> {
    let mut rows = Vec::new();
    let (mut violations, mut strict_violations) = (0u64, 0u64);
    for &n in ns {
        let cb = build_codebook(n, max_exact)?;
        let table = TypeClassTable::cached(n)?;
        for &p in ps {
            let lengths = length_distribution(&cb, p)?;
            for &eps in epsilons {
                let k = epsilon_rate_exact(&cb, p, eps)?.k as u64;
                let strict = lengths.threshold_strict(eps) as u64;
                let m_eps = m_epsilon(&table, p, eps)?;
                let budget = ceil_log2(&m_eps);
                violations += u64::from(k > budget);
                strict_violations += u64::from(strict > budget);
                rows.push(json!({
                    "n": n,
                    "p": p,
                    "epsilon": eps,
                    "k": k,
                    "k_strict": strict,
                    "m_epsilon": m_eps.to_string(),
                    "ceil_log2_m_epsilon": budget,
                    "holds": k <= budget,
                }));
            }
        }
    }
    let mut report = BoundCheckReport::new("budget", violations as f64, 0.0, 0.0)
        .param("cases", rows.len())
        .param("strict_threshold_violations", strict_violations)
        .param("rows", rows);
    if violations > 0 && strict_violations == 0 {
        report = report.note(
            "every violation is one bit at a power-of-two M(eps); the strict threshold P(l > k) <= eps has none",
        );
    }
    Ok(report)
}

/// Overflow of the class-size threshold: frequency of
/// `log₂ N(n, j(S)) > m·γ` against `ε`.
#[allow(clippy::too_many_arguments)]
pub fn gamma_check(
    n: usize,
    p: f64,
    eps: f64,
    a: f64,
    delta1: f64,
    bounds: &BoundsConfig,
    trials: u64,
    seed: u64,
) -> Result<BoundCheckReport> {
    let delta2 = chernoff_exponent(p, delta1)?.corrected;
    let c_u = bounds.upper_constant_bits();
    let gamma = gamma_threshold(n, p, eps, a, delta2, c_u)?;
    let table = TypeClassTable::cached(n)?;
    let m = pair_count(n);
    let limit = m as f64 * gamma;
    let overflow: Vec<bool> = (0..=m)
        .map(|j| table.log2_count(j).map(|l| l > limit))
        .collect::<Result<_>>()?;
    let model = ErModel::new(p, seed)?;
    let hits = count_events(seed, trials, DEFAULT_SHARDS, |rng| overflow[model.sample_edge_count(n, rng)]);
    let freq = hits as f64 / trials as f64;
    Ok(BoundCheckReport::new("gamma", freq, eps, 3.0 * std_error(eps, trials))
        .param("n", n)
        .param("p", p)
        .param("epsilon", eps)
        .param("A", a)
        .param("delta1", delta1)
        .param("delta2", delta2)
        .param("C_U", c_u)
        .param("gamma", gamma)
        .param("trials", trials)
        .param("seed", seed)
        .param("shards", DEFAULT_SHARDS)
        .param("overflow_count", hits))
}

/// Validator families run by [`run_verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Chernoff,
    Stirling,
    Berry,
    Wright,
    Budget,
    Gamma,
    Residual,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Chernoff,
        Suite::Stirling,
        Suite::Berry,
        Suite::Wright,
        Suite::Budget,
        Suite::Gamma,
        Suite::Residual,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub trials: u64,
    pub berry_a: f64,
    pub bounds: BoundsConfig,
    pub max_exact: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 20240601,
            trials: 100_000,
            berry_a: 1.0,
            bounds: BoundsConfig::default(),
            max_exact: crate::tscode::DEFAULT_MAX_EXACT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub config: VerifyConfig,
    pub checks: Vec<BoundCheckReport>,
    pub all_pass: bool,
}

/// Default parameter sets for each suite.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<BoundCheckReport>> {
    let (seed, trials) = (config.seed, config.trials);
    Ok(match suite {
        Suite::Chernoff => vec![chernoff_check(30, 0.3, 0.5, trials, seed)?],
        Suite::Stirling => vec![stirling_check(10_000, 10_000, seed)?],
        Suite::Berry => vec![berry_esseen_check(&[100, 400, 1600, 6400], 0.2, trials, seed, config.berry_a)?.summary()],
        Suite::Wright => vec![wright_convergence_report(&[10, 20, 30], JRule::Half)?.summary()],
        Suite::Budget => vec![budget_check(
            &[3, 4, 5, 6],
            &[0.1, 0.3, 0.5, 0.7],
            &[0.05, 0.1, 0.25],
            config.max_exact,
        )?],
        Suite::Gamma => {
            let mut out = Vec::new();
            for n in [20, 30] {
                for p in [0.2, 0.3] {
                    for eps in [0.1, 0.2] {
                        out.push(gamma_check(n, p, eps, 0.5, 0.5, &config.bounds, trials, seed)?);
                    }
                }
            }
            out
        }
        Suite::Residual => vec![second_order_residuals(
            &[4, 5, 6, 7],
            &[0.2, 0.3],
            &[0.1, 0.25],
            config.max_exact,
        )?
        .summary()],
    })
}

pub fn run_verify(suites: &[Suite], config: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    for &suite in suites {
        checks.extend(run_suite(suite, config)?);
    }
    Ok(VerifyReport {
        schema: VERIFY_SCHEMA.to_string(),
        config: config.clone(),
        all_pass: checks.iter().all(|c| c.verdict.passed()),
        checks,
    })
}
