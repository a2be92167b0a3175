//! Exact rationals for conjectured probabilities: factorization, exact
//! ratios, and a search for fractions with small-prime denominators near a
//! Monte Carlo estimate.
//!
//! Numerators are unrestricted; only denominators must be smooth over the
//! configured primes.

mod factor;
mod search;

pub use factor::{exact_ratio, factorize, format_factors, reconstruct, FactoredRational, Factorization};
pub use search::{
    conjecture_search, default_interval, search, smooth_numbers, Ranking, RationalCandidate, SearchOptions,
    DEFAULT_INTERVAL_Z, DEFAULT_MAX_DENOMINATOR, DEFAULT_PRIMES, MAX_DENOMINATOR_CAP, MAX_ENUMERATED,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConjectureError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("search would enumerate about {0:.0} fractions; narrow the interval or lower the denominator bound")]
    TooWide(f64),
}
