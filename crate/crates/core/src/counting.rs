//! Exact and approximate counts of structures by edge count, empirical
//! entropy, and Stirling bounds on type-class sizes.
//!
//! All lengths and entropies are in bits. `mu` is the one exception: it is a
//! regime indicator and uses the natural logarithm.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graphs::{pair_count, Structure};
use crate::{Error, Result};

/// Vertex count beyond which exact tables are not computed implicitly.
pub const EXACT_TABLE_LIMIT: usize = 40;

/// `log₂` of a big integer, accurate to `f64` precision. Zero maps to -∞.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).log2() + shift as f64
}

pub fn binomial(m: u64, j: u64) -> BigUint {
    if j > m {
        return BigUint::zero();
    }
    let j = j.min(m - j);
    (0..j).fold(BigUint::one(), |acc, i| acc * (m - i) / (i + 1))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `log₂ n!` by direct summation.
pub fn log2_factorial(n: u64) -> f64 {
    log2_big(&factorial(n))
}

/// Integer partitions of `n` as `(part, multiplicity)` lists with parts in
/// decreasing order, generated in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest == 0 {
            let mut grouped: Vec<(usize, usize)> = Vec::new();
            for &part in current.iter() {
                match grouped.last_mut() {
                    Some((p, count)) if *p == part => *count += 1,
                    _ => grouped.push((part, 1)),
                }
            }
            out.push(grouped);
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            current.push(part);
            rec(rest - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Cycle lengths (length → number of cycles) induced on vertex pairs by a
/// permutation with the given cycle type.
pub fn pair_cycle_type(cycle_type: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    let mut cycles = BTreeMap::new();
    let mut add = |len: usize, count: usize| {
        if count > 0 {
            *cycles.entry(len).or_insert(0) += count;
        }
    };
    for (i, &(k, a)) in cycle_type.iter().enumerate() {
        // Pairs inside one k-cycle.
        if k % 2 == 1 {
            add(k, a * (k - 1) / 2);
        } else {
            add(k, a * (k / 2 - 1));
            add(k / 2, a);
        }
        // Pairs across two distinct k-cycles.
        add(k, k * a * a.saturating_sub(1) / 2);
        // Pairs across a k-cycle and an l-cycle, l != k.
        for &(l, b) in &cycle_type[i + 1..] {
            add(k.lcm(&l), a * b * k.gcd(&l));
        }
    }
    cycles
}

/// Number of permutations of `0..n` with the given cycle type, `n!/z`.
fn class_size(n: usize, cycle_type: &[(usize, usize)]) -> BigUint {
    let mut z = BigUint::one();
    for &(k, a) in cycle_type {
        z *= BigUint::from(k).pow(a as u32) * factorial(a as u64);
    }
    factorial(n as u64) / z
}

/// Coefficients of `Π (1 + x^c)^e` up to degree `m`.
fn edge_polynomial(m: usize, pair_cycles: &BTreeMap<usize, usize>) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::zero(); m + 1];
    // Seed with the largest factor as a spaced binomial row.
    let (&c0, &e0) = pair_cycles
        .iter()
        .max_by_key(|&(_, &e)| e)
        .expect("at least one pair cycle");
    let mut binom = BigUint::one();
    for k in 0..=e0 {
        coeffs[c0 * k] = binom.clone();
        binom = binom * (e0 - k) / (k + 1);
    }
    let mut degree = c0 * e0;
    for (&c, &e) in pair_cycles {
        let repeats = if c == c0 { e - e0 } else { e };
        for _ in 0..repeats {
            for d in (c..=degree + c).rev() {
                let (hi, lo) = coeffs.split_at_mut(d);
                lo[0] += &hi[d - c];
            }
            degree += c;
        }
    }
    debug_assert_eq!(degree, m);
    coeffs
}

/// Exact number of structures on `n` vertices for every edge count
/// `j = 0..=m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeClassTable {
    n: usize,
    counts: Vec<BigUint>,
}

impl TypeClassTable {
    /// Burnside/Pólya count: average the edge-generating polynomial of the
    /// pair action over one representative of each conjugacy class.
    pub fn compute(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::VertexCount {
                n,
                max: usize::MAX,
            });
        }
        let m = pair_count(n);
        if m == 0 {
            return Ok(TypeClassTable {
                n,
                counts: vec![BigUint::one()],
            });
        }
        let weighted = partitions(n)
            .par_iter()
            .map(|cycle_type| {
                let weight = class_size(n, cycle_type);
                let mut poly = edge_polynomial(m, &pair_cycle_type(cycle_type));
                for c in &mut poly {
                    *c *= &weight;
                }
                poly
            })
            .reduce(
                || vec![BigUint::zero(); m + 1],
                |mut acc, poly| {
                    for (a, p) in acc.iter_mut().zip(poly) {
                        *a += p;
                    }
                    acc
                },
            );
        let group = factorial(n as u64);
        let counts = weighted
            .into_iter()
            .map(|total| {
                let (q, r) = total.div_rem(&group);
                debug_assert!(r.is_zero(), "Burnside sum not divisible by n!");
                q
            })
            .collect();
        Ok(TypeClassTable { n, counts })
    }

    /// Shared, memoised table for `n`.
    pub fn cached(n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TypeClassTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().unwrap().get(&n) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(Self::compute(n)?);
        cache.lock().unwrap().insert(n, Arc::clone(&table));
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, j: usize) -> Result<&BigUint> {
        self.counts.get(j).ok_or(Error::EdgeCount {
            n: self.n,
            j,
            m: self.pair_count(),
        })
    }

    pub fn log2_count(&self, j: usize) -> Result<f64> {
        Ok(log2_big(self.count(j)?))
    }

    /// Number of unlabeled graphs on `n` vertices.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }
}

/// `N(n, j)`: number of unlabeled graphs with `n` vertices and `j` edges.
pub fn exact_count(n: usize, j: usize) -> Result<BigUint> {
    let m = pair_count(n);
    if n == 0 || j > m {
        return Err(Error::EdgeCount { n, j, m });
    }
    Ok(TypeClassTable::cached(n)?.count(j)?.clone())
}

/// The Wright approximation `Λ(n, j) = C(m, j) / n!`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaApprox {
    pub log2: f64,
    /// `Λ` itself when it fits in an `f64`.
    pub value: Option<f64>,
}

pub fn lambda_approx(n: usize, j: usize) -> Result<LambdaApprox> {
    let m = pair_count(n);
    if n == 0 || j > m {
        return Err(Error::EdgeCount { n, j, m });
    }
    let log2 = log2_big(&binomial(m as u64, j as u64)) - log2_factorial(n as u64);
    let value = log2.exp2();
    Ok(LambdaApprox {
        log2,
        value: (value.is_finite() && value > 0.0).then_some(value),
    })
}

/// `μ = 2j/n − ln n`.
pub fn mu(n: usize, j: usize) -> f64 {
    2.0 * j as f64 / n as f64 - (n as f64).ln()
}

/// Binary entropy of the edge frequency `j/m`, with `0·log 0 = 0`.
pub fn empirical_entropy_of(j: usize, m: usize) -> f64 {
    if m == 0 || j == 0 || j >= m {
        return 0.0;
    }
    let (a, b) = (j.min(m - j) as f64 / m as f64, j.max(m - j) as f64 / m as f64);
    -a * a.log2() - b * b.log2()
}

pub fn empirical_entropy(s: &Structure) -> f64 {
    empirical_entropy_of(s.edge_count(), s.pair_count())
}

/// `m·H_emp + ½(log m − log j − log jᶜ) − log √(2π)`, in nats: the common
/// core of both Stirling bounds on `ln C(m, j)`.
fn stirling_core(m: u64, j: u64) -> Result<f64> {
    if j == 0 || j >= m {
        return Err(Error::DegenerateClass { m, j });
    }
    let (mf, jf, cf) = (m as f64, j as f64, (m - j) as f64);
    let pivot = -jf * (jf / mf).ln() - cf * (cf / mf).ln();
    Ok(pivot + 0.5 * (mf.ln() - jf.ln() - cf.ln()) - 0.5 * (2.0 * PI).ln())
}

/// Upper bound on `log₂ C(m, j)` from Robbins' form of Stirling's formula:
/// the remainder terms contribute at most `1/12` nats.
pub fn stirling_upper(m: u64, j: u64) -> Result<f64> {
    Ok((stirling_core(m, j)? + 1.0 / 12.0) / LN_2)
}

/// Lower bound on `log₂ C(m, j)`; the remainders cost at most `1/6` nats.
pub fn stirling_lower(m: u64, j: u64) -> Result<f64> {
    Ok((stirling_core(m, j)? - 1.0 / 6.0) / LN_2)
}

/// Regime and slack settings for [`class_size_bounds`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsConfig {
    /// Smallest `μ` treated as inside Wright's asymptotic regime.
    pub mu_min: f64,
    /// Allowance in bits for the unmodelled `O(1)` ratio term.
    pub slack_bits: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            mu_min: 10.0,
            slack_bits: 2.0,
        }
    }
}

impl BoundsConfig {
    /// Constant `C` with `log₂ |T_S| ≤ m·H_emp − log₂ n! + C` inside the
    /// regime. Uses `log j + log jᶜ ≥ log m − 1`.
    pub fn upper_constant_bits(&self) -> f64 {
        0.5 + (1.0 / 12.0 - 0.5 * (2.0 * PI).ln()) / LN_2 + self.slack_bits
    }
}

/// Bounds, in bits, on the size of the type class with `j` edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSizeBounds {
    pub n: usize,
    pub j: usize,
    /// `stirling_lower(m, j) − log₂ n!`.
    pub lower: f64,
    /// `stirling_upper(m, j) − log₂ n!`.
    pub upper: f64,
    /// `log₂ N(n, j)` when an exact table is available.
    pub exact: Option<f64>,
    pub slack_bits: f64,
    pub mu: f64,
    /// `μ ≥ μ_min`; outside the regime the upper bound may fail.
    pub wright_regime: bool,
}

impl ClassSizeBounds {
    /// `lower − slack ≤ exact ≤ upper + slack`; `None` without an exact value.
    pub fn contains_exact(&self) -> Option<bool> {
        self.exact
            .map(|e| self.lower - self.slack_bits <= e && e <= self.upper + self.slack_bits)
    }

    /// The bound only has to hold inside the regime.
    pub fn holds(&self) -> bool {
        !self.wright_regime || self.contains_exact().unwrap_or(true)
    }
}

pub fn class_size_bounds(n: usize, j: usize, config: &BoundsConfig) -> Result<ClassSizeBounds> {
    let m = pair_count(n);
    if n == 0 || j > m {
        return Err(Error::EdgeCount { n, j, m });
    }
    let log_fact = log2_factorial(n as u64);
    let lower = stirling_lower(m as u64, j as u64)? - log_fact;
    let upper = stirling_upper(m as u64, j as u64)? - log_fact;
    let exact = if n <= EXACT_TABLE_LIMIT {
        Some(TypeClassTable::cached(n)?.log2_count(j)?)
    } else {
        None
    };
    let mu = mu(n, j);
    Ok(ClassSizeBounds {
        n,
        j,
        lower,
        upper,
        exact,
        slack_bits: config.slack_bits,
        mu,
        wright_regime: mu >= config.mu_min,
    })
}

/// One exported count row: `n, j, N_exact, log2_lambda, mu, lower_bits,
/// upper_bits`. Bounds are absent for the two degenerate classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub n: usize,
    pub j: usize,
    pub count: String,
    pub log2_lambda: f64,
    pub mu: f64,
    pub lower_bits: Option<f64>,
    pub upper_bits: Option<f64>,
}

impl CountRow {
    pub const CSV_HEADER: &'static str = "n,j,N_exact,log2_lambda,mu,lower_bits,upper_bits";

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.j,
            self.count,
            self.log2_lambda,
            self.mu,
            opt(self.lower_bits),
            opt(self.upper_bits)
        )
    }
}

pub fn count_rows(table: &TypeClassTable, config: &BoundsConfig) -> Result<Vec<CountRow>> {
    let n = table.n();
    (0..=table.pair_count())
        .map(|j| {
            let bounds = class_size_bounds(n, j, config).ok();
            Ok(CountRow {
                n,
                j,
                count: table.count(j)?.to_string(),
                log2_lambda: lambda_approx(n, j)?.log2,
                mu: mu(n, j),
                lower_bits: bounds.as_ref().map(|b| b.lower),
                upper_bits: bounds.as_ref().map(|b| b.upper),
            })
        })
        .collect()
}
