use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BoundCheckReport;
use crate::counting::{lambda_approx, mu, TypeClassTable};
use crate::graphs::pair_count;
use crate::{Error, Result};

pub const WRIGHT_SCHEMA: &str = "tsgraph.wright/v1";

/// How the edge count is chosen for each `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JRule {
    /// `j = ⌈m/2⌉`.
    Half,
    Zero,
    Fixed(usize),
}

impl JRule {
    pub fn edge_count(self, n: usize) -> usize {
        match self {
            JRule::Half => pair_count(n).div_ceil(2),
            JRule::Zero => 0,
            JRule::Fixed(j) => j,
        }
    }
}

impl fmt::Display for JRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JRule::Half => f.write_str("half"),
            JRule::Zero => f.write_str("zero"),
            JRule::Fixed(j) => write!(f, "{j}"),
        }
    }
}

impl FromStr for JRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "half" => Ok(JRule::Half),
            "zero" => Ok(JRule::Zero),
            other => other
                .parse()
                .map(JRule::Fixed)
                .map_err(|_| format!("unknown edge-count rule '{other}' (half, zero or an integer)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrightRow {
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub mu: f64,
    /// `μ > 0`; the ratio only tends to one when `μ` grows without bound.
    pub regime: bool,
    pub log2_exact: f64,
    pub log2_lambda: f64,
    /// `N / Λ`.
    pub ratio: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrightReport {
    pub schema: String,
    pub rule: String,
    pub rows: Vec<WrightRow>,
    /// `|N/Λ − 1|` strictly decreases along the rows.
    pub strictly_decreasing: bool,
}

impl WrightReport {
    /// Pass iff the deviation strictly decreases and the last row is within
    /// 5%.
    pub fn summary(&self) -> BoundCheckReport {
        let last = self.rows.last().map_or(f64::INFINITY, |r| r.deviation);
        let ns: Vec<usize> = self.rows.iter().map(|r| r.n).collect();
        let mut report = BoundCheckReport::new("wright", last, 0.05, 0.0)
            .param("n_list", ns)
            .param("rule", &self.rule)
            .param("strictly_decreasing", self.strictly_decreasing)
            .param("rows", &self.rows);
        if !self.strictly_decreasing {
            report.verdict = super::Verdict::Fail;
            report = report.note("deviation does not decrease strictly");
        }
        report
    }
}

pub fn wright_convergence_report(n_list: &[usize], rule: JRule) -> Result<WrightReport> {
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let m = pair_count(n);
        let j = rule.edge_count(n);
        if j > m {
            return Err(Error::EdgeCount { n, j, m });
        }
        let log2_exact = TypeClassTable::cached(n)?.log2_count(j)?;
        let log2_lambda = lambda_approx(n, j)?.log2;
        let ratio = (log2_exact - log2_lambda).exp2();
        let mu = mu(n, j);
        rows.push(WrightRow {
            n,
            m,
            j,
            mu,
            regime: mu > 0.0,
            log2_exact,
            log2_lambda,
            ratio,
            deviation: (ratio - 1.0).abs(),
        });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].deviation < w[0].deviation);
    Ok(WrightReport {
        schema: WRIGHT_SCHEMA.to_string(),
        rule: rule.to_string(),
        rows,
        strictly_decreasing,
    })
}
