use serde::{Deserialize, Serialize};

/// Counts from one batch of trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub batch_id: u64,
    pub trials: u64,
    pub successes: u64,
    /// PPT states with `|ρ^PT| > |ρ|`.
    pub det_pt_greater: u64,
    pub resamples: u64,
}

/// Aggregated counts; merging is commutative and associative.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub trials: u64,
    pub ppt_successes: u64,
    pub det_split_pt_greater: u64,
    pub resamples: u64,
    /// Sorted by batch id.
    pub batch_records: Vec<BatchRecord>,
}

impl Tally {
    pub fn from_records(records: impl IntoIterator<Item = BatchRecord>) -> Self {
        let mut t = Tally::default();
        for r in records {
            t.push(r);
        }
        t
    }

    pub fn push(&mut self, record: BatchRecord) {
        self.trials += record.trials;
        self.ppt_successes += record.successes;
        self.det_split_pt_greater += record.det_pt_greater;
        self.resamples += record.resamples;
        let at = self
            .batch_records
            .partition_point(|r| r.batch_id < record.batch_id);
        self.batch_records.insert(at, record);
    }

    pub fn merge(&mut self, other: &Tally) {
        for &r in &other.batch_records {
            self.push(r);
        }
    }

    /// Checks the count invariants; returns a description of the first
    /// violation.
    pub fn validate(&self) -> Result<(), String> {
        if self.ppt_successes > self.trials {
            return Err("more successes than trials".into());
        }
        if self.det_split_pt_greater > self.ppt_successes {
            return Err("determinant split exceeds successes".into());
        }
        let sum = Tally::from_records(self.batch_records.iter().copied());
        if (sum.trials, sum.ppt_successes, sum.det_split_pt_greater, sum.resamples)
            != (self.trials, self.ppt_successes, self.det_split_pt_greater, self.resamples)
        {
            return Err("batch records do not sum to the totals".into());
        }
        if self.batch_records.windows(2).any(|w| w[0].batch_id >= w[1].batch_id) {
            return Err("duplicate or unsorted batch ids".into());
        }
        Ok(())
    }

    pub fn p_hat(&self) -> f64 {
        self.ppt_successes as f64 / self.trials as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(id: u64, trials: u64, s: u64, d: u64) -> BatchRecord {
        BatchRecord {
            batch_id: id,
            trials,
            successes: s,
            det_pt_greater: d,
            resamples: id % 2,
        }
    }

    #[test]
    fn totals_match_records() {
        let t = Tally::from_records([record(1, 10, 3, 1), record(0, 10, 2, 2)]);
        assert_eq!((t.trials, t.ppt_successes, t.det_split_pt_greater, t.resamples), (20, 5, 3, 1));
        assert_eq!(t.batch_records[0].batch_id, 0);
        t.validate().unwrap();
    }

    #[test]
    fn validation_catches_inconsistent_totals() {
        let mut t = Tally::from_records([record(0, 10, 2, 1)]);
        t.trials = 11;
        assert!(t.validate().is_err());
        let dup = Tally::from_records([record(0, 10, 2, 1), record(0, 10, 2, 1)]);
        assert!(dup.validate().is_err());
    }

    proptest! {
        #[test]
        fn merge_order_is_irrelevant(counts in proptest::collection::vec((1u64..1000, 0u64..1000), 1..20), rot in 0usize..20) {
            let records: Vec<_> = counts
                .iter()
                .enumerate()
                .map(|(i, &(t, s))| record(i as u64, t.max(s), s, s / 2))
                .collect();
            let forward = Tally::from_records(records.iter().copied());
            let mut rotated = records.clone();
            let k = rot % rotated.len();
            rotated.rotate_left(k);
            let (left, right) = rotated.split_at(rotated.len() / 2);
            let mut a = Tally::from_records(right.iter().copied());
            a.merge(&Tally::from_records(left.iter().copied()));
            prop_assert_eq!(&forward, &a);
            prop_assert!(forward.validate().is_ok());
        }
    }
}
