use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::factor::{factorize, Factorization};
use super::ConjectureError;
use crate::estimator::wilson_interval;

pub const DEFAULT_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
pub const DEFAULT_MAX_DENOMINATOR: u64 = 10_000_000;
pub const MAX_DENOMINATOR_CAP: u64 = 1_000_000_000;
/// Normal quantile of the default search window.
pub const DEFAULT_INTERVAL_Z: f64 = 4.0;
/// Enumeration budget; wider searches must narrow the window or the
/// denominator bound.
pub const MAX_ENUMERATED: f64 = 5e7;
/// Resolution floor of the coincidence score, as a fraction of the standard
/// error implied by the window.
const RESOLUTION: f64 = 0.01;

/// Order in which candidates are returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ranking {
    /// Expected number of smooth fractions, with denominator no larger than
    /// the candidate's, that would land at least as close to the estimate by
    /// chance: `2·max(distance, ε)·Σ_{d' ≤ d} d'` over smooth `d'`, where `ε` is
    /// a hundredth of the window's standard error. Small is better, so an
    /// exact hit with a huge denominator can lose to a near hit with a small one.
    #[default]
    Coincidence,
    /// Smallest denominator first, ties broken by distance.
    Denominator,
    /// Closest first, ties broken by denominator.
    Distance,
}

impl std::str::FromStr for Ranking {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "coincidence" => Ok(Ranking::Coincidence),
            "denominator" => Ok(Ranking::Denominator),
            "distance" => Ok(Ranking::Distance),
            other => Err(format!("unknown ranking `{other}` (expected coincidence|denominator|distance)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub primes: Vec<u64>,
    pub max_denominator: u64,
    pub ranking: Ranking,
    /// Keep only the best `limit` candidates. Numerators are factorized only
    /// for the ones kept.
    pub limit: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            primes: DEFAULT_PRIMES.to_vec(),
            max_denominator: DEFAULT_MAX_DENOMINATOR,
            ranking: Ranking::default(),
            limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalCandidate {
    pub num: i64,
    pub den: i64,
    pub value: f64,
    pub distance: f64,
    pub num_factors: Factorization,
    pub den_factors: Factorization,
    /// Ranking key; smaller ranks first.
    pub score: f64,
}

impl RationalCandidate {
    pub fn factored(&self) -> super::FactoredRational {
        super::FactoredRational {
            num: self.num,
            den: self.den,
            num_factors: self.num_factors.clone(),
            den_factors: self.den_factors.clone(),
        }
    }
}

/// Window of `z` Wilson standard errors around an estimate from `trials`
/// samples, widened if needed so that it contains `p_hat`.
pub fn default_interval(p_hat: f64, trials: u64, z: f64) -> (f64, f64) {
    let successes = (p_hat * trials as f64).round().clamp(0.0, trials as f64) as u64;
    let (lo, hi) = wilson_interval(successes, trials, z);
    (lo.min(p_hat), hi.max(p_hat))
}

/// All integers `≤ max` whose prime factors lie in `primes`, ascending.
pub fn smooth_numbers(primes: &[u64], max: u64) -> Vec<u64> {
    fn walk(primes: &[u64], max: u64, acc: u64, out: &mut Vec<u64>) {
        out.push(acc);
        for (i, &p) in primes.iter().enumerate() {
            if let Some(next) = acc.checked_mul(p).filter(|&x| x <= max) {
                walk(&primes[i..], max, next, out);
            }
        }
    }
    let mut out = Vec::new();
    if max >= 1 {
        walk(primes, max, 1, &mut out);
    }
    out.sort_unstable();
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && factorize(p).get(&p) == Some(&1)
}

fn validate(p_hat: f64, lo: f64, hi: f64, opts: &SearchOptions) -> Result<Vec<u64>, ConjectureError> {
    let bad = |msg: String| Err(ConjectureError::InvalidInput(msg));
    if !(p_hat.is_finite() && lo.is_finite() && hi.is_finite()) {
        return bad("estimate and interval must be finite".into());
    }
    if !(lo <= p_hat && p_hat <= hi) {
        return bad(format!("interval [{lo}, {hi}] does not contain {p_hat}"));
    }
    if opts.max_denominator < 1 || opts.max_denominator > MAX_DENOMINATOR_CAP {
        return bad(format!("max denominator must lie in 1..={MAX_DENOMINATOR_CAP}"));
    }
    if opts.primes.is_empty() {
        return bad("prime set is empty".into());
    }
    if let Some(&p) = opts.primes.iter().find(|&&p| !is_prime(p)) {
        return bad(format!("{p} is not prime"));
    }
    let mut primes = opts.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    Ok(primes)
}

/// Reduced fractions `num/den` in `[lo, hi]` whose denominators are smooth
/// over `primes` and at most `max_denominator`, ranked by [`Ranking::Coincidence`].
pub fn conjecture_search(
    p_hat: f64,
    lo: f64,
    hi: f64,
    primes: &[u64],
    max_denominator: u64,
) -> Result<Vec<RationalCandidate>, ConjectureError> {
    search(
        p_hat,
        lo,
        hi,
        &SearchOptions {
            primes: primes.to_vec(),
            max_denominator,
            ..SearchOptions::default()
        },
    )
}

pub fn search(p_hat: f64, lo: f64, hi: f64, opts: &SearchOptions) -> Result<Vec<RationalCandidate>, ConjectureError> {
    let primes = validate(p_hat, lo, hi, opts)?;
    let dens = smooth_numbers(&primes, opts.max_denominator);
    let budget: f64 = dens.iter().map(|&d| (hi - lo) * d as f64 + 1.0).sum();
    if budget > MAX_ENUMERATED {
        return Err(ConjectureError::TooWide(budget));
    }

    let eps = RESOLUTION * (hi - lo) / (2.0 * DEFAULT_INTERVAL_Z);
    let mut cumulative = 0.0;
    // (num, den, value, distance, score)
    let mut hits: Vec<(i64, i64, f64, f64, f64)> = Vec::new();
    for &d in &dens {
        cumulative += d as f64;
        let df = d as f64;
        let d = d as i64;
        let first = (lo * df).floor() as i64 - 1;
        let last = (hi * df).ceil() as i64 + 1;
        for num in first..=last {
            let value = num as f64 / df;
            if value < lo || value > hi || num.gcd(&d) != 1 {
                continue;
            }
            let distance = (value - p_hat).abs();
            let score = match opts.ranking {
                Ranking::Coincidence => 2.0 * distance.max(eps) * cumulative,
                Ranking::Denominator => df,
                Ranking::Distance => distance,
            };
            hits.push((num, d, value, distance, score));
        }
    }
    hits.sort_by(|a, b| {
        let tie = match opts.ranking {
            Ranking::Denominator => a.3.total_cmp(&b.3),
            _ => a.1.cmp(&b.1),
        };
        a.4.total_cmp(&b.4).then(tie).then(a.0.cmp(&b.0))
    });
    if let Some(limit) = opts.limit {
        hits.truncate(limit);
    }
    Ok(hits
        .into_iter()
        .map(|(num, den, value, distance, score)| RationalCandidate {
            num,
            den,
            value,
            distance,
            num_factors: if num == 0 { Factorization::new() } else { factorize(num.unsigned_abs()) },
            den_factors: factorize(den as u64),
            score,
        })
        .collect())
}
