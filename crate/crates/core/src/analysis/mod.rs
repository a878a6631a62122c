//! ε-coding rates of the Type Size code, the second-order rate bound and
//! Monte Carlo validators for the concentration results behind it.

mod bernoulli;
pub mod checks;
pub mod montecarlo;
mod normal;
mod rate;

pub use bernoulli::{entropy, varentropy, BernoulliModel};
pub use normal::{normal_cdf, q, q_inv};
pub use rate::{
    epsilon_rate_bracket, epsilon_rate_exact, gamma_threshold, rate_report,
    theoretical_rate_bound, EpsilonRate, RateBound, RateBracket, RateReport, RATE_SCHEMA,
};
