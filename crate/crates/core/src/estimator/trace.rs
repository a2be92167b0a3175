use std::io::{self, Write};

use super::tally::Tally;
use super::wilson::wilson_interval;

/// Header of the convergence trace CSV.
pub const TRACE_HEADER: &str = "trials,successes,p_hat,wilson_lo,wilson_hi";

/// Running estimate after a prefix of the batches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// Cumulative estimates at batch boundaries, one row each time the running
/// trial count reaches another multiple of `stride`, plus a final row holding
/// the totals.
pub fn emit_trace(tally: &Tally, stride: u64, z: f64) -> Vec<TraceRow> {
    assert!(stride >= 1, "trace stride must be positive");
    let mut rows = Vec::new();
    let (mut trials, mut successes) = (0u64, 0u64);
    let mut next_mark = stride;
    let row = |trials: u64, successes: u64| {
        let (wilson_lo, wilson_hi) = wilson_interval(successes, trials, z);
        TraceRow {
            trials,
            successes,
            p_hat: successes as f64 / trials as f64,
            wilson_lo,
            wilson_hi,
        }
    };
    for r in &tally.batch_records {
        trials += r.trials;
        successes += r.successes;
        if trials >= next_mark {
            rows.push(row(trials, successes));
            next_mark = (trials / stride + 1) * stride;
        }
    }
    if trials > 0 && rows.last().map(|r| r.trials) != Some(trials) {
        rows.push(row(trials, successes));
    }
    rows
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.trials, r.successes, r.p_hat, r.wilson_lo, r.wilson_hi
        )?;
    }
    out.flush()
}
