//! Second-order rate bound and the exact and bracketed ε-coding rates of the
//! Type Size code.

use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::bernoulli::BernoulliModel;
use super::normal::q_inv;
use crate::counting::{log2_big, log2_factorial, TypeClassTable};
use crate::graphs::pair_count;
use crate::numeric::CompensatedSum;
use crate::tscode::{class_masses, class_ordering, codeword_length, length_distribution, Codebook};
use crate::{Error, Result};

pub const RATE_SCHEMA: &str = "tsgraph.rate/v1";

/// `mH + σ√m·Q⁻¹(ε) − log₂ n!`, term by term, in bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub entropy_bits: f64,
    pub dispersion_bits: f64,
    pub log2_factorial: f64,
    pub total_bits: f64,
    pub per_symbol: f64,
    /// The lower-order term is not modelled; its size shows up as the
    /// measured residual instead.
    pub unmodeled: String,
}

fn check_n(n: usize) -> Result<usize> {
    let m = pair_count(n);
    if m == 0 {
        return Err(Error::domain("n", n as f64, "n >= 2"));
    }
    Ok(m)
}

pub fn theoretical_rate_bound(n: usize, p: f64, eps: f64) -> Result<RateBound> {
    let m = check_n(n)? as f64;
    let model = BernoulliModel::new(p)?;
    let z = q_inv(eps)?;
    let entropy_bits = m * model.entropy;
    let dispersion_bits = model.dispersion() * m.sqrt() * z;
    let log2_factorial = log2_factorial(n as u64);
    let total_bits = entropy_bits + dispersion_bits - log2_factorial;
    Ok(RateBound {
        entropy_bits,
        dispersion_bits,
        log2_factorial,
        total_bits,
        per_symbol: total_bits / m,
        unmodeled: "O(1/n^2)".to_string(),
    })
}

/// The threshold `γ` used to split typical from atypical edge counts:
/// `H + σ/√m·Q⁻¹(ε − A/√m − e^(−mδ₂)) − log₂ n!/m + C_U/m`.
///
/// At `p = 1/2` the dispersion term is zero and the adjusted `ε` is not
/// consulted.
pub fn gamma_threshold(n: usize, p: f64, eps: f64, a: f64, delta2: f64, c_u: f64) -> Result<f64> {
    let m = check_n(n)? as f64;
    let model = BernoulliModel::new(p)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("epsilon", eps, "(0, 1)"));
    }
    let dispersion = if model.varentropy == 0.0 {
        0.0
    } else {
        let adjusted = eps - a / m.sqrt() - (-m * delta2).exp();
        if !(adjusted > 0.0 && adjusted < 1.0) {
            return Err(Error::Regime(format!(
                "adjusted epsilon {adjusted:.6} outside (0, 1) at n={n}, A={a}; n is too small"
            )));
        }
        model.dispersion() / m.sqrt() * q_inv(adjusted)?
    };
    Ok(model.entropy + dispersion - log2_factorial(n as u64) / m + c_u / m)
}

/// The minimal length threshold `k` and the rate `k/m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRate {
    pub k: usize,
    pub rate: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::domain("epsilon", eps, "[0, 1)"))
    }
}

/// `min{k : P(ℓ ≥ k) ≤ ε} / m` from the full length distribution.
pub fn epsilon_rate_exact(cb: &Codebook, p: f64, eps: f64) -> Result<EpsilonRate> {
    check_eps(eps)?;
    let m = check_n(cb.n())?;
    let k = length_distribution(cb, p)?.threshold(eps);
    Ok(EpsilonRate {
        k,
        rate: k as f64 / m as f64,
    })
}

/// Bounds on the ε-rate obtained from class sizes alone.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateBracket {
    pub k_low: usize,
    pub k_high: usize,
    pub low: f64,
    pub high: f64,
}

/// Brackets the ε-rate without ranking structures inside a class.
///
/// Every structure of class `j` has probability `L·q` with
/// `q = p^j(1−p)^(m−j)` and `1 ≤ L ≤ n!`. When the boundary `2^k − 1`
/// falls inside a class, the mass of its upper part is bounded using those
/// two extremes together with the class total.
pub fn epsilon_rate_bracket(table: &TypeClassTable, p: f64, eps: f64) -> Result<RateBracket> {
    check_eps(eps)?;
    let n = table.n();
    let m = check_n(n)?;
    let masses = class_masses(table, p)?;
    let ordering = class_ordering(table);
    let ln_fact = log2_factorial(n as u64) * LN_2;
    let ln_big = |x: &BigUint| log2_big(x) * LN_2;
    let total = ordering.total().clone();
    let longest = codeword_length(&(&total - BigUint::one())) as usize;

    let tail_bounds = |k: usize| -> (f64, f64) {
        let boundary = (BigUint::one() << k) - BigUint::one();
        let (mut lo, mut hi) = (CompensatedSum::new(), CompensatedSum::new());
        let offsets = ordering.offsets();
        for (c, class) in ordering.classes().iter().enumerate() {
            let (start, end) = (&offsets[c], &offsets[c + 1]);
            let mass = masses[class.j];
            if *start >= boundary {
                lo.add(mass);
                hi.add(mass);
            } else if *end > boundary {
                let j = class.j as f64;
                let ln_q = j * p.ln() + (m as f64 - j) * (-p).ln_1p();
                let above = ln_big(&(end - &boundary));
                let below = ln_big(&(&boundary - start));
                let low = (above + ln_q).exp().max(mass - (below + ln_fact + ln_q).exp());
                let high = (mass - (below + ln_q).exp()).min((above + ln_fact + ln_q).exp());
                lo.add(low.clamp(0.0, mass));
                hi.add(high.clamp(0.0, mass));
            }
        }
        (lo.value(), hi.value())
    };

    let (mut k_low, mut k_high) = (None, None);
    for k in 0..=longest + 1 {
        let (lo, hi) = tail_bounds(k);
        if k_low.is_none() && lo <= eps {
            k_low = Some(k);
        }
        if hi <= eps {
            k_high = Some(k);
            break;
        }
    }
    let k_high = k_high.expect("tail beyond the longest codeword is zero");
    let k_low = k_low.unwrap_or(k_high);
    Ok(RateBracket {
        k_low,
        k_high,
        low: k_low as f64 / m as f64,
        high: k_high as f64 / m as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub schema: String,
    pub n: usize,
    pub m: usize,
    pub p: f64,
    pub epsilon: f64,
    pub bound: RateBound,
    pub exact: Option<EpsilonRate>,
    pub bracket: Option<RateBracket>,
    /// `m·R̂ − bound.total_bits`, with `R̂` the exact rate when available and
    /// the upper end of the bracket otherwise.
    pub residual_bits: Option<f64>,
}

/// Assembles a report from whichever of the codebook and count table are
/// supplied.
pub fn rate_report(
    n: usize,
    p: f64,
    eps: f64,
    codebook: Option<&Codebook>,
    table: Option<&TypeClassTable>,
) -> Result<RateReport> {
    let m = check_n(n)?;
    let bound = theoretical_rate_bound(n, p, eps)?;
    let exact = codebook
        .map(|cb| {
            if cb.n() != n {
                return Err(Error::VertexMismatch { expected: n, found: cb.n() });
            }
            epsilon_rate_exact(cb, p, eps)
        })
        .transpose()?;
    let bracket = table
        .map(|t| {
            if t.n() != n {
                return Err(Error::VertexMismatch { expected: n, found: t.n() });
            }
            epsilon_rate_bracket(t, p, eps)
        })
        .transpose()?;
    let k = exact.map(|e| e.k).or(bracket.map(|b| b.k_high));
    Ok(RateReport {
        schema: RATE_SCHEMA.to_string(),
        n,
        m,
        p,
        epsilon: eps,
        residual_bits: k.map(|k| k as f64 - bound.total_bits),
        bound,
        exact,
        bracket,
    })
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub(crate) fn ceil_log2(x: &BigUint) -> u64 {
    if x.is_zero() || x.is_one() {
        return 0;
    }
    (x - BigUint::one()).bits()
}
