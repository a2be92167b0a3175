use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::tally::{BatchRecord, Tally};
use super::{EstimateConfig, EstimatorError};
use crate::density::BipartiteShape;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointTally {
    pub trials: u64,
    pub successes: u64,
    pub det_split: u64,
    pub resamples: u64,
}

/// Resumable state of a run: every batch below `next_batch_id` is done.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub seed: u64,
    pub shape: BipartiteShape,
    pub batch_size: u64,
    pub next_batch_id: u64,
    pub tally: CheckpointTally,
    pub version: String,
    pub trials: u64,
    pub stream_offset: u64,
    pub tolerances: Tolerances,
    pub batches: Vec<BatchRecord>,
}

impl Checkpoint {
    pub fn new(config: &EstimateConfig, tally: &Tally) -> Self {
        Checkpoint {
            seed: config.seed,
            shape: config.shape,
            batch_size: config.batch_size,
            next_batch_id: tally.batch_records.len() as u64,
            tally: CheckpointTally {
                trials: tally.trials,
                successes: tally.ppt_successes,
                det_split: tally.det_split_pt_greater,
                resamples: tally.resamples,
            },
            version: crate::VERSION.to_string(),
            trials: config.trials,
            stream_offset: config.stream_offset,
            tolerances: config.tolerances,
            batches: tally.batch_records.clone(),
        }
    }

    /// Rebuilds the tally after checking it against the configuration it is
    /// about to resume.
    pub fn restore(&self, config: &EstimateConfig) -> Result<Tally, EstimatorError> {
        let mismatch = |what: &str| Err(EstimatorError::Config(format!("checkpoint {what} does not match the run")));
        if self.seed != config.seed {
            return mismatch("seed");
        }
        if self.shape != config.shape {
            return mismatch("shape");
        }
        if self.batch_size != config.batch_size {
            return mismatch("batch_size");
        }
        if self.trials != config.trials {
            return mismatch("trial count");
        }
        if self.stream_offset != config.stream_offset {
            return mismatch("stream offset");
        }
        if self.tolerances != config.tolerances {
            return mismatch("tolerances");
        }
        if self.version != crate::VERSION {
            return Err(EstimatorError::Config(format!(
                "checkpoint written by version {}, this is {}",
                self.version,
                crate::VERSION
            )));
        }
        let tally = Tally::from_records(self.batches.iter().copied());
        tally.validate().map_err(EstimatorError::Config)?;
        let contiguous = tally.batch_records.iter().enumerate().all(|(i, r)| r.batch_id == i as u64);
        let totals = CheckpointTally {
            trials: tally.trials,
            successes: tally.ppt_successes,
            det_split: tally.det_split_pt_greater,
            resamples: tally.resamples,
        };
        if !contiguous || self.next_batch_id != tally.batch_records.len() as u64 || totals != self.tally {
            return Err(EstimatorError::Config("checkpoint batches are inconsistent with its totals".into()));
        }
        if self.next_batch_id > config.num_batches() {
            return mismatch("batch count");
        }
        for r in &tally.batch_records {
            if r.trials != config.batch_trials(r.batch_id) {
                return mismatch("batch layout");
            }
        }
        Ok(tally)
    }

    pub fn load(path: &Path) -> Result<Self, EstimatorError> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Writes through a sibling temp file and a rename, so a crash never
    /// leaves a truncated checkpoint.
    pub fn save(&self, path: &Path) -> Result<(), EstimatorError> {
        let json = serde_json::to_string_pretty(self)?;
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, json)?;
        fs::rename(&tmp, path).map_err(|e| EstimatorError::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    }
}
