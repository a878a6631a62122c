use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn check(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("p", p, "(0, 1)"))
    }
}

/// Binary entropy `H(p)` in bits.
pub fn entropy(p: f64) -> Result<f64> {
    check(p)?;
    let (a, b) = (p.min(1.0 - p), p.max(1.0 - p));
    Ok(-a * a.log2() - b * b.log2())
}

/// Varentropy `σ²(p) = p(1−p)·log₂²((1−p)/p)` in bits², the variance of the
/// self-information `−log₂ p(X)`.
pub fn varentropy(p: f64) -> Result<f64> {
    check(p)?;
    let llr = ((1.0 - p) / p).log2();
    Ok(p * (1.0 - p) * llr * llr)
}

/// An edge distribution with its entropy and varentropy precomputed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernoulliModel {
    pub p: f64,
    pub entropy: f64,
    pub varentropy: f64,
}

impl BernoulliModel {
    pub fn new(p: f64) -> Result<Self> {
        Ok(BernoulliModel {
            p,
            entropy: entropy(p)?,
            varentropy: varentropy(p)?,
        })
    }

    /// `σ(p)`.
    pub fn dispersion(&self) -> f64 {
        self.varentropy.sqrt()
    }

    /// Self-information of one pair, `−log₂ p(x)`.
    pub fn self_information(&self, edge: bool) -> f64 {
        if edge {
            -self.p.log2()
        } else {
            -(1.0 - self.p).log2()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fair_coin() {
        assert_eq!(entropy(0.5).unwrap(), 1.0);
        assert_eq!(varentropy(0.5).unwrap(), 0.0);
    }

    #[test]
    fn quarter() {
        // 0.25·2 + 0.75·log₂(4/3)
        assert!((entropy(0.25).unwrap() - 0.8112781244591328).abs() < 1e-15);
        assert!((entropy(0.25).unwrap() - 0.8113).abs() < 1e-4);
    }

    #[test]
    fn symmetric_under_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let p: f64 = rng.random_range(1e-6..1.0 - 1e-6);
            assert!((entropy(p).unwrap() - entropy(1.0 - p).unwrap()).abs() <= 1e-15);
            let (v, w) = (varentropy(p).unwrap(), varentropy(1.0 - p).unwrap());
            assert!((v - w).abs() <= 1e-12 * v.max(1e-300));
            assert!((0.0..=1.0).contains(&entropy(p).unwrap()));
        }
    }

    #[test]
    fn domain_errors() {
        for p in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(entropy(p).is_err());
            assert!(varentropy(p).is_err());
        }
    }

    #[test]
    fn matches_monte_carlo_moments() {
        let draws = 1_000_000;
        for p in [0.1, 0.3, 0.8] {
            let model = BernoulliModel::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..draws {
                let x = model.self_information(rng.random::<f64>() < p);
                sum += x;
                sq += x * x;
            }
            let mean = sum / draws as f64;
            let var = sq / draws as f64 - mean * mean;
            let se_mean = (model.varentropy / draws as f64).sqrt();
            assert!((mean - model.entropy).abs() <= 3.0 * se_mean, "p={p} mean {mean}");
            // Var of the sample variance for a two-point law: (μ₄ − σ⁴)/N.
            let a = model.self_information(true) - model.entropy;
            let b = model.self_information(false) - model.entropy;
            let mu4 = p * a.powi(4) + (1.0 - p) * b.powi(4);
            let se_var = ((mu4 - model.varentropy.powi(2)) / draws as f64).sqrt();
            assert!((var - model.varentropy).abs() <= 3.0 * se_var, "p={p} var {var}");
        }
    }
}
