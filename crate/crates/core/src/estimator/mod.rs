//! Batch Monte Carlo estimation of PPT probabilities.
//!
//! Trials are split into batches of `batch_size`. Batch `b` draws from its own
//! random stream `(seed, stream_offset + b)`, so the counts are a function of
//! the configuration alone: the number of workers and any checkpoint/resume
//! cycle leave the result bit-identical.

mod checkpoint;
mod tally;
mod trace;
pub mod verify;
mod wilson;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::mpsc;
use std::thread;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use checkpoint::{Checkpoint, CheckpointTally};
pub use tally::{BatchRecord, Tally};
pub use trace::{emit_trace, write_trace_csv, TraceRow, TRACE_HEADER};
pub use wilson::{binomial_se, wilson_center, wilson_interval};

use crate::density::{BipartiteShape, DensityError, DensitySampler};
use crate::numerics::{Field, NumericsError};
use crate::ppt::ppt_verdict;
use crate::randmat::{GaussianScalar, RngStream};
use crate::tolerance::Tolerances;

pub const DEFAULT_BATCH_SIZE: u64 = 100_000;
pub const DEFAULT_Z: f64 = 1.96;

#[derive(Debug, thiserror::Error)]
pub enum EstimatorError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Everything that determines the outcome of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateConfig {
    pub shape: BipartiteShape,
    pub trials: u64,
    pub seed: u64,
    pub batch_size: u64,
    pub z: f64,
    pub tolerances: Tolerances,
    /// Added to the batch index to select its stream. Lets two runs share a
    /// seed without sharing random numbers.
    pub stream_offset: u64,
}

impl EstimateConfig {
    pub fn new(shape: BipartiteShape, trials: u64, seed: u64) -> Self {
        EstimateConfig {
            shape,
            trials,
            seed,
            batch_size: DEFAULT_BATCH_SIZE,
            z: DEFAULT_Z,
            tolerances: Tolerances::DEFAULT,
            stream_offset: 0,
        }
    }

    pub fn with_batch_size(mut self, batch_size: u64) -> Self {
        self.batch_size = batch_size;
        self
    }

    pub fn with_stream_offset(mut self, offset: u64) -> Self {
        self.stream_offset = offset;
        self
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        if self.trials == 0 {
            return Err(EstimatorError::Config("trials must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(EstimatorError::Config("batch size must be at least 1".into()));
        }
        if !(self.z.is_finite() && self.z > 0.0) {
            return Err(EstimatorError::Config(format!("z must be positive, got {}", self.z)));
        }
        if self.stream_offset.checked_add(self.num_batches()).is_none() {
            return Err(EstimatorError::Config("stream offset overflows the batch index".into()));
        }
        self.tolerances.validate().map_err(EstimatorError::Config)
    }

    pub fn num_batches(&self) -> u64 {
        self.trials.div_ceil(self.batch_size)
    }

    /// Trials in batch `b`; only the last batch may be short.
    pub fn batch_trials(&self, b: u64) -> u64 {
        let start = b * self.batch_size;
        self.batch_size.min(self.trials.saturating_sub(start))
    }
}

/// Runs one batch on its own stream.
pub fn run_batch(config: &EstimateConfig, batch_id: u64) -> Result<BatchRecord, EstimatorError> {
    match config.shape.field() {
        Field::Real => run_batch_typed::<f64>(config, batch_id),
        Field::Complex => run_batch_typed::<Complex64>(config, batch_id),
    }
}

fn run_batch_typed<T: GaussianScalar<Real = f64>>(
    config: &EstimateConfig,
    batch_id: u64,
) -> Result<BatchRecord, EstimatorError> {
    let trials = config.batch_trials(batch_id);
    let mut stream = RngStream::new(config.seed, config.stream_offset + batch_id);
    let mut sampler = DensitySampler::new(config.shape, config.tolerances);
    let (mut successes, mut det_pt_greater) = (0, 0);
    for _ in 0..trials {
        let rho = sampler.sample::<T>(&mut stream)?;
        let v = ppt_verdict(&rho, config.tolerances.ppt)?;
        if v.is_ppt {
            successes += 1;
            if v.pt_determinant_greater() {
                det_pt_greater += 1;
            }
        }
    }
    Ok(BatchRecord {
        batch_id,
        trials,
        successes,
        det_pt_greater,
        resamples: sampler.resamples(),
    })
}

/// Parallel batch driver with optional checkpointing.
#[derive(Debug, Clone)]
pub struct Estimator {
    config: EstimateConfig,
    workers: usize,
    checkpoint_path: Option<PathBuf>,
    resume: Option<Checkpoint>,
}

impl Estimator {
    pub fn new(config: EstimateConfig) -> Self {
        Estimator {
            config,
            workers: 1,
            checkpoint_path: None,
            resume: None,
        }
    }

    /// Worker threads; 0 picks the available parallelism.
    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Rewrites `path` after every batch that extends the completed prefix.
    pub fn checkpoint_to(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint_path = Some(path.into());
        self
    }

    pub fn resume_from(mut self, checkpoint: Checkpoint) -> Self {
        self.resume = Some(checkpoint);
        self
    }

    pub fn config(&self) -> &EstimateConfig {
        &self.config
    }

    pub fn run(self) -> Result<EstimateReport, EstimatorError> {
        let total = self.config.num_batches();
        let tally = self.run_prefix(total)?;
        Ok(EstimateReport::new(self.config, tally))
    }

    /// Completes batches `0..batches` and returns the resulting checkpoint.
    /// Used to interrupt a run deliberately.
    pub fn run_batches(self, batches: u64) -> Result<Checkpoint, EstimatorError> {
        let tally = self.run_prefix(batches.min(self.config.num_batches()))?;
        Ok(Checkpoint::new(&self.config, &tally))
    }

    fn effective_workers(&self) -> usize {
        match self.workers {
            0 => thread::available_parallelism().map_or(1, |n| n.get()),
            w => w,
        }
    }

    fn run_prefix(&self, end: u64) -> Result<Tally, EstimatorError> {
        self.config.validate()?;
        let mut tally = match &self.resume {
            Some(c) => c.restore(&self.config)?,
            None => Tally::default(),
        };
        let start = tally.batch_records.len() as u64;
        if start >= end {
            return Ok(tally);
        }
        let config = self.config;
        let workers = self.effective_workers().min((end - start) as usize).max(1);
        let next = AtomicU64::new(start);
        let abort = AtomicBool::new(false);
        let (tx, rx) = mpsc::channel();

        thread::scope(|scope| -> Result<(), EstimatorError> {
            for _ in 0..workers {
                let tx = tx.clone();
                let (next, abort) = (&next, &abort);
                scope.spawn(move || {
                    while !abort.load(Ordering::Relaxed) {
                        let b = next.fetch_add(1, Ordering::Relaxed);
                        if b >= end {
                            break;
                        }
                        if tx.send(run_batch(&config, b)).is_err() {
                            break;
                        }
                    }
                });
            }
            drop(tx);

            let mut pending = BTreeMap::new();
            let mut frontier = start;
            for result in rx {
                let record = match result {
                    Ok(r) => r,
                    Err(e) => {
                        abort.store(true, Ordering::Relaxed);
                        return Err(e);
                    }
                };
                pending.insert(record.batch_id, record);
                let before = frontier;
                while let Some(r) = pending.remove(&frontier) {
                    tally.push(r);
                    frontier += 1;
                }
                if frontier > before {
                    if let Some(path) = &self.checkpoint_path {
                        if let Err(e) = Checkpoint::new(&config, &tally).save(path) {
                            abort.store(true, Ordering::Relaxed);
                            return Err(e);
                        }
                    }
                }
            }
            Ok(())
        })?;
        debug_assert!(tally.validate().is_ok());
        Ok(tally)
    }
}

/// Convenience wrapper: one worker, default batch size.
pub fn run_trials(
    shape: BipartiteShape,
    trials: u64,
    seed: u64,
    batch_size: u64,
    resume_from: Option<Checkpoint>,
) -> Result<EstimateReport, EstimatorError> {
    let mut est = Estimator::new(EstimateConfig::new(shape, trials, seed).with_batch_size(batch_size));
    if let Some(c) = resume_from {
        est = est.resume_from(c);
    }
    est.run()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonBand {
    pub z: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetSplit {
    pub pt_greater: u64,
    /// PPT states the split is taken over.
    pub total: u64,
}

impl DetSplit {
    pub fn fraction(&self) -> f64 {
        self.pt_greater as f64 / self.total as f64
    }
}

/// Result of a run, carrying its full configuration so it can be rerun.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub shape: BipartiteShape,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub wilson: WilsonBand,
    pub det_split: DetSplit,
    pub seed: u64,
    pub batch_size: u64,
    pub tolerances: Tolerances,
    pub resamples: u64,
    pub version: String,
    #[serde(default)]
    pub stream_offset: u64,
    /// Per-batch counts; not serialized.
    #[serde(skip)]
    pub batches: Vec<BatchRecord>,
}

impl EstimateReport {
    pub fn new(config: EstimateConfig, tally: Tally) -> Self {
        let (lo, hi) = wilson_interval(tally.ppt_successes, tally.trials, config.z);
        EstimateReport {
            shape: config.shape,
            trials: tally.trials,
            successes: tally.ppt_successes,
            p_hat: tally.p_hat(),
            wilson: WilsonBand { z: config.z, lo, hi },
            det_split: DetSplit {
                pt_greater: tally.det_split_pt_greater,
                total: tally.ppt_successes,
            },
            seed: config.seed,
            batch_size: config.batch_size,
            tolerances: config.tolerances,
            resamples: tally.resamples,
            version: crate::VERSION.to_string(),
            stream_offset: config.stream_offset,
            batches: tally.batch_records,
        }
    }

    pub fn config(&self) -> EstimateConfig {
        EstimateConfig {
            shape: self.shape,
            trials: self.trials,
            seed: self.seed,
            batch_size: self.batch_size,
            z: self.wilson.z,
            tolerances: self.tolerances,
            stream_offset: self.stream_offset,
        }
    }

    /// Tally rebuilt from the batch records, or from the totals alone when
    /// the report was read back from JSON.
    pub fn tally(&self) -> Tally {
        if !self.batches.is_empty() {
            return Tally::from_records(self.batches.iter().copied());
        }
        Tally {
            trials: self.trials,
            ppt_successes: self.successes,
            det_split_pt_greater: self.det_split.pt_greater,
            resamples: self.resamples,
            batch_records: Vec::new(),
        }
    }

    /// Binomial standard error of `p_hat`.
    pub fn standard_error(&self) -> f64 {
        binomial_se(self.successes, self.trials)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubits() -> BipartiteShape {
        BipartiteShape::full_rank(2, 2, Field::Complex).unwrap()
    }

    #[test]
    fn batch_layout_covers_trials() {
        let c = EstimateConfig::new(qubits(), 1050, 1).with_batch_size(100);
        assert_eq!(c.num_batches(), 11);
        assert_eq!(c.batch_trials(0), 100);
        assert_eq!(c.batch_trials(10), 50);
        assert_eq!((0..11).map(|b| c.batch_trials(b)).sum::<u64>(), 1050);
    }

    #[test]
    fn zero_trials_is_a_config_error() {
        let c = EstimateConfig::new(qubits(), 0, 1);
        assert!(matches!(Estimator::new(c).run(), Err(EstimatorError::Config(_))));
        let c = EstimateConfig::new(qubits(), 10, 1).with_batch_size(0);
        assert!(matches!(c.validate(), Err(EstimatorError::Config(_))));
    }

    #[test]
    fn single_trial_report_is_consistent() {
        let r = run_trials(qubits(), 1, 3, 10, None).unwrap();
        assert_eq!(r.trials, 1);
        assert!(r.p_hat == 0.0 || r.p_hat == 1.0);
        r.tally().validate().unwrap();
        assert!(r.wilson.lo <= r.p_hat && r.p_hat <= r.wilson.hi);
    }

    #[test]
    fn workers_do_not_change_the_report() {
        let c = EstimateConfig::new(qubits(), 2_000, 42).with_batch_size(150);
        let one = Estimator::new(c).workers(1).run().unwrap();
        let four = Estimator::new(c).workers(4).run().unwrap();
        assert_eq!(one, four);
        assert_eq!(one.batches.len(), 14);
    }

    #[test]
    fn report_json_has_the_documented_keys() {
        let r = run_trials(qubits(), 200, 5, 100, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "shape", "trials", "successes", "p_hat", "wilson", "det_split", "seed", "batch_size", "tolerances",
            "resamples", "version",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["shape"]["N"], 4);
        assert_eq!(v["wilson"]["z"], 1.96);
        assert_eq!(v["det_split"]["total"], v["successes"]);
        let back: EstimateReport = serde_json::from_value(v).unwrap();
        assert_eq!(back.config(), r.config());
        assert_eq!(back.tally().ppt_successes, r.successes);
    }

    #[test]
    fn checkpoint_resume_matches_uninterrupted_run() {
        let c = EstimateConfig::new(qubits(), 1_000, 9).with_batch_size(100);
        let full = Estimator::new(c).run().unwrap();
        let ckpt = Estimator::new(c).workers(3).run_batches(4).unwrap();
        assert_eq!(ckpt.next_batch_id, 4);
        let resumed = Estimator::new(c).resume_from(ckpt).workers(2).run().unwrap();
        assert_eq!(full, resumed);
    }

    #[test]
    fn checkpoint_rejects_other_configurations() {
        let c = EstimateConfig::new(qubits(), 1_000, 9).with_batch_size(100);
        let ckpt = Estimator::new(c).run_batches(2).unwrap();
        let mut other = c;
        other.seed = 10;
        assert!(matches!(
            Estimator::new(other).resume_from(ckpt.clone()).run(),
            Err(EstimatorError::Config(_))
        ));
        let mut tampered = ckpt;
        tampered.tally.successes += 1;
        assert!(matches!(
            Estimator::new(c).resume_from(tampered).run(),
            Err(EstimatorError::Config(_))
        ));
    }

    #[test]
    fn checkpoint_file_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt.json");
        let c = EstimateConfig::new(qubits(), 500, 2).with_batch_size(100);
        let ckpt = Estimator::new(c).checkpoint_to(&path).run_batches(3).unwrap();
        let loaded = Checkpoint::load(&path).unwrap();
        assert_eq!(loaded, ckpt);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        for key in ["seed", "shape", "batch_size", "next_batch_id", "tally", "version"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["trials", "successes", "det_split", "resamples"] {
            assert!(v["tally"].get(key).is_some(), "missing tally.{key}");
        }
    }
}
