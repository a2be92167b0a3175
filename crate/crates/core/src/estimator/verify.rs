//! Verification suites that compare fresh runs against known structure.

use serde::Serialize;

use super::{EstimateConfig, EstimateReport, Estimator, EstimatorError};
use crate::catalog::{self, KnownValue};
use crate::density::BipartiteShape;
use crate::numerics::Field;
use crate::tolerance::Tolerances;

/// Stream offset for the reduced-rank run of the halving check, far beyond
/// any batch index the full-rank run can reach.
pub const HALF_THEOREM_STREAM_OFFSET: u64 = 1 << 40;

/// Run parameters shared by every suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub trials: u64,
    pub seed: u64,
    pub batch_size: u64,
    pub workers: usize,
    pub tolerances: Tolerances,
}

impl RunOptions {
    pub fn new(trials: u64, seed: u64) -> Self {
        RunOptions {
            trials,
            seed,
            batch_size: super::DEFAULT_BATCH_SIZE,
            workers: 1,
            tolerances: Tolerances::DEFAULT,
        }
    }

    fn estimate(&self, shape: BipartiteShape, stream_offset: u64) -> Result<EstimateReport, EstimatorError> {
        let mut config = EstimateConfig::new(shape, self.trials, self.seed)
            .with_batch_size(self.batch_size)
            .with_stream_offset(stream_offset);
        config.tolerances = self.tolerances;
        Estimator::new(config).workers(self.workers).run()
    }
}

/// One line of a verification printout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub target: f64,
    pub estimate: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, target: f64, estimate: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            target,
            estimate,
            tolerance,
            pass: (estimate - target).abs() <= tolerance,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: estimate {:.8} target {:.8} tolerance {:.2e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.estimate,
            self.target,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfTheoremReport {
    pub full: EstimateReport,
    pub reduced: EstimateReport,
    pub ratio: f64,
    /// Delta-method standard error of `ratio`.
    pub ratio_se: f64,
}

impl HalfTheoremReport {
    pub fn check(&self, n_se: f64) -> Check {
        Check::within(
            format!("rank {}/{} ratio ({})", self.reduced.shape.rank(), self.full.shape.rank(), self.full.shape),
            0.5,
            self.ratio,
            n_se * self.ratio_se,
        )
    }
}

/// Estimates the full-rank and rank `N−1` probabilities for the same
/// subsystems and forms their ratio. Both runs use `seed`; the reduced run
/// reads streams offset by [`HALF_THEOREM_STREAM_OFFSET`].
pub fn verify_half_theorem(
    m: usize,
    n: usize,
    field: Field,
    opts: &RunOptions,
) -> Result<HalfTheoremReport, EstimatorError> {
    let full_shape = BipartiteShape::full_rank(m, n, field)?;
    if full_shape.total() < 2 {
        return Err(EstimatorError::Config("halving check needs N ≥ 2".into()));
    }
    let reduced_shape = full_shape.with_rank(full_shape.total() - 1)?;
    let full = opts.estimate(full_shape, 0)?;
    let reduced = opts.estimate(reduced_shape, HALF_THEOREM_STREAM_OFFSET)?;
    let ratio = reduced.p_hat / full.p_hat;
    let rel = |r: &EstimateReport| r.standard_error() / r.p_hat;
    let ratio_se = ratio * (rel(&full).powi(2) + rel(&reduced).powi(2)).sqrt();
    Ok(HalfTheoremReport {
        full,
        reduced,
        ratio,
        ratio_se,
    })
}

/// Counts PPT hits among states of rank at most `max(m, n)`, which are
/// entangled with probability one.
pub fn verify_zero_rank(
    m: usize,
    n: usize,
    field: Field,
    rank: usize,
    opts: &RunOptions,
) -> Result<EstimateReport, EstimatorError> {
    if rank > m.max(n) {
        return Err(EstimatorError::Config(format!(
            "rank {rank} exceeds max({m}, {n}); PPT states have positive probability there"
        )));
    }
    opts.estimate(BipartiteShape::new(m, n, rank, field)?, 0)
}

pub fn zero_rank_check(report: &EstimateReport) -> Check {
    Check {
        name: format!("zero PPT hits ({})", report.shape),
        target: 0.0,
        estimate: report.successes as f64,
        tolerance: 0.0,
        pass: report.successes == 0,
    }
}

/// Full-rank two-qubit run for the determinant split among PPT states.
pub fn verify_det_split(opts: &RunOptions) -> Result<EstimateReport, EstimatorError> {
    opts.estimate(BipartiteShape::full_rank(2, 2, Field::Complex)?, 0)
}

/// Fraction of PPT states with `|ρ^PT| > |ρ|` against one half, at
/// `n_sigma · sqrt(1/4 / total)`.
pub fn det_split_check(report: &EstimateReport, n_sigma: f64) -> Check {
    let total = report.det_split.total.max(1) as f64;
    Check::within(
        format!("det split ({})", report.shape),
        0.5,
        report.det_split.fraction(),
        n_sigma * (0.25 / total).sqrt(),
    )
}

/// Runs one catalog shape and compares with its value at `n_sigma` binomial
/// standard deviations evaluated at the target.
pub fn verify_known_value(
    known: &KnownValue,
    opts: &RunOptions,
    n_sigma: f64,
) -> Result<(EstimateReport, Check), EstimatorError> {
    let report = opts.estimate(known.shape(), 0)?;
    let p = known.value();
    let tol = n_sigma * (p * (1.0 - p) / report.trials as f64).sqrt();
    let check = Check::within(format!("{} = {}/{}", known.name, known.num, known.den), p, report.p_hat, tol);
    Ok((report, check))
}

pub fn verify_known_values(
    names: Option<&[&str]>,
    opts: &RunOptions,
    n_sigma: f64,
) -> Result<Vec<(EstimateReport, Check)>, EstimatorError> {
    let mut out = Vec::new();
    for k in catalog::KNOWN_VALUES {
        if names.is_some_and(|ns| !ns.contains(&k.name)) {
            continue;
        }
        out.push(verify_known_value(k, opts, n_sigma)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_run_uses_distinct_streams() {
        let opts = RunOptions {
            batch_size: 500,
            ..RunOptions::new(2_000, 7)
        };
        let h = verify_half_theorem(2, 2, Field::Complex, &opts).unwrap();
        assert_eq!(h.reduced.stream_offset, HALF_THEOREM_STREAM_OFFSET);
        assert_eq!(h.full.seed, h.reduced.seed);
        assert_eq!(h.reduced.shape.rank(), 3);
        assert!(h.ratio_se > 0.0 && h.ratio.is_finite());
    }

    #[test]
    fn zero_rank_rejects_large_ranks() {
        let opts = RunOptions::new(10, 1);
        assert!(verify_zero_rank(2, 3, Field::Real, 4, &opts).is_err());
    }

    #[test]
    fn pure_states_are_never_ppt() {
        let r = verify_zero_rank(2, 3, Field::Complex, 1, &RunOptions::new(2_000, 4)).unwrap();
        assert!(zero_rank_check(&r).pass);
    }

    #[test]
    fn check_tolerance_is_inclusive() {
        assert!(Check::within("x", 0.25, 0.5, 0.25).pass);
        assert!(!Check::within("x", 0.25, 0.5, 0.2499).pass);
    }
}
