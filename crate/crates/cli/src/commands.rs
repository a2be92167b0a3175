use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hsprob::catalog;
use hsprob::conjecture::{self, SearchOptions};
use hsprob::estimator::verify::{self, Check, RunOptions};
use hsprob::estimator::{
    emit_trace, write_trace_csv, Checkpoint, EstimateConfig, EstimateReport, Estimator,
};
use hsprob::{BipartiteShape, Field, Tolerances};

use crate::{ConjectureArgs, EstimateArgs, RunArgs, ShapeArgs, Suite, TraceArgs, VerifyArgs};

pub enum Failure {
    Checks,
    Config(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

const DEFAULT_TRIALS: u64 = 1_000_000;

fn shape_of(s: &ShapeArgs) -> Result<BipartiteShape, Failure> {
    let (m, n) = s.dims;
    Ok(BipartiteShape::new(m, n, s.rank.unwrap_or(m * n), s.field)?)
}

fn tolerances(r: &RunArgs) -> Result<Tolerances, Failure> {
    let t = Tolerances {
        psd: r.psd_tol,
        ppt: r.ppt_tol,
        rankdef: r.rankdef_tol,
    };
    t.validate().map_err(Failure::Config)?;
    Ok(t)
}

fn config_of(shape: BipartiteShape, r: &RunArgs, default_trials: u64, z: f64) -> Result<EstimateConfig, Failure> {
    let mut c = EstimateConfig::new(shape, r.trials.unwrap_or(default_trials), r.seed).with_batch_size(r.batch_size);
    c.tolerances = tolerances(r)?;
    c.z = z;
    c.validate()?;
    Ok(c)
}

fn run_options(r: &RunArgs, default_trials: u64) -> Result<RunOptions, Failure> {
    let trials = r.trials.unwrap_or(default_trials);
    if trials == 0 {
        return Err(Failure::Config("trials must be at least 1".into()));
    }
    if r.batch_size == 0 {
        return Err(Failure::Config("batch size must be at least 1".into()));
    }
    Ok(RunOptions {
        trials,
        seed: r.seed,
        batch_size: r.batch_size,
        workers: r.workers,
        tolerances: tolerances(r)?,
    })
}

/// Opens the destination up front so an unwritable path fails before any
/// sampling.
fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            let f = File::create(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn summarize(r: &EstimateReport) {
    eprintln!(
        "{}: {} of {} PPT, p_hat = {:.8}, Wilson(z={}) [{:.8}, {:.8}], resamples {}",
        r.shape,
        r.successes,
        r.trials,
        r.p_hat,
        r.wilson.z,
        r.wilson.lo,
        r.wilson.hi,
        r.resamples
    );
    if let Some(k) = catalog::for_shape(&r.shape) {
        eprintln!("  reference {}/{} = {:.8}", k.num, k.den, k.value());
    }
}

pub fn estimate(a: EstimateArgs) -> Outcome {
    let shape = shape_of(&a.shape)?;
    let config = config_of(shape, &a.run, DEFAULT_TRIALS, a.z)?.with_stream_offset(a.stream_offset);
    config.validate()?;
    let mut est = Estimator::new(config).workers(a.run.workers);
    if let Some(p) = &a.resume {
        est = est.resume_from(Checkpoint::load(p)?);
    }
    if let Some(p) = a.checkpoint.as_ref().or(a.resume.as_ref()) {
        est = est.checkpoint_to(p);
    }

    if let Some(n) = a.stop_after {
        if a.checkpoint.is_none() && a.resume.is_none() {
            return Err(Failure::Config("--stop-after needs --checkpoint".into()));
        }
        if n < config.num_batches() {
            let ckpt = est.run_batches(n)?;
            eprintln!(
                "stopped after {} of {} batches ({} trials)",
                ckpt.next_batch_id,
                config.num_batches(),
                ckpt.tally.trials
            );
            return Ok(());
        }
    }

    let mut out = open_out(a.out.as_deref())?;
    let mut trace_out = match &a.trace {
        Some(p) => Some(open_out(Some(p))?),
        None => None,
    };
    let report = est.run()?;
    summarize(&report);
    writeln!(out, "{}", report.to_json())?;
    out.flush()?;
    if let Some(t) = trace_out.as_mut() {
        let rows = emit_trace(&report.tally(), a.trace_stride.unwrap_or(config.batch_size).max(1), config.z);
        write_trace_csv(&rows, t)?;
    }
    Ok(())
}

pub fn conjecture(a: ConjectureArgs) -> Outcome {
    let (p_hat, trials) = match &a.report {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            let r: EstimateReport = serde_json::from_str(&text)?;
            (r.p_hat, Some(a.trials.unwrap_or(r.trials)))
        }
        None => (a.phat.expect("clap enforces --phat or --report"), a.trials),
    };
    let (lo, hi) = match (a.interval, a.lo, a.hi, trials) {
        (Some(hw), ..) => (p_hat - hw, p_hat + hw),
        (None, Some(lo), Some(hi), _) => (lo, hi),
        (None, _, _, Some(n)) if n > 0 => conjecture::default_interval(p_hat, n, a.z),
        _ => return Err(Failure::Config("give --trials, --interval or --lo/--hi to set the search window".into())),
    };
    let opts = SearchOptions {
        primes: a.primes.clone(),
        max_denominator: a.max_den,
        ranking: a.ranking,
        limit: (a.limit > 0).then_some(a.limit),
    };
    let candidates = conjecture::search(p_hat, lo, hi, &opts)?;

    let to_stdout = a.out.as_deref() == Some(Path::new("-"));
    let mut out = a.out.as_deref().map(|p| open_out(Some(p))).transpose()?;
    match candidates.first() {
        Some(top) if to_stdout => eprintln!("{}", top.factored()),
        Some(top) => println!("{}", top.factored()),
        None => eprintln!("warning: no candidates in [{lo}, {hi}]"),
    }
    if let Some(out) = out.as_mut() {
        writeln!(out, "{}", serde_json::to_string_pretty(&candidates)?)?;
        out.flush()?;
    }
    Ok(())
}

pub fn verify(a: VerifyArgs) -> Outcome {
    let mut checks: Vec<Check> = Vec::new();
    let mut report = |c: Check| {
        println!("{c}");
        checks.push(c);
    };
    match a.suite {
        Suite::HalfTheorem => {
            let (m, n) = a.dims.unwrap_or((2, 2));
            let opts = run_options(&a.run, DEFAULT_TRIALS)?;
            let h = verify::verify_half_theorem(m, n, a.field.unwrap_or(Field::Complex), &opts)?;
            eprintln!(
                "rank {} p_hat {:.6}, rank {} p_hat {:.6}, ratio {:.5} ± {:.5}",
                h.full.shape.rank(),
                h.full.p_hat,
                h.reduced.shape.rank(),
                h.reduced.p_hat,
                h.ratio,
                h.ratio_se
            );
            report(h.check(a.n_sigma));
        }
        Suite::ZeroRank => {
            let (m, n) = a.dims.unwrap_or((2, 3));
            let rank = a.rank.unwrap_or(m.max(n));
            let opts = run_options(&a.run, 100_000)?;
            let fields = match a.field {
                Some(f) => vec![f],
                None => vec![Field::Real, Field::Complex],
            };
            for field in fields {
                let r = verify::verify_zero_rank(m, n, field, rank, &opts)?;
                report(verify::zero_rank_check(&r));
            }
        }
        Suite::DetSplit => {
            let r = verify::verify_det_split(&run_options(&a.run, DEFAULT_TRIALS)?)?;
            report(verify::det_split_check(&r, a.n_sigma));
        }
        Suite::KnownValues => {
            for name in &a.names {
                if catalog::find(name).is_none() {
                    let known: Vec<_> = catalog::KNOWN_VALUES.iter().map(|k| k.name).collect();
                    return Err(Failure::Config(format!("unknown catalog entry `{name}`; known: {}", known.join(", "))));
                }
            }
            let names: Vec<&str> = a.names.iter().map(String::as_str).collect();
            let filter = (!names.is_empty()).then_some(names.as_slice());
            let opts = run_options(&a.run, 100_000)?;
            for (_, c) in verify::verify_known_values(filter, &opts, a.n_sigma)? {
                report(c);
            }
        }
    }
    if let Some(p) = &a.out {
        let mut out = open_out(Some(p))?;
        writeln!(out, "{}", serde_json::to_string_pretty(&checks)?)?;
        out.flush()?;
    }
    if checks.iter().all(|c| c.pass) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

pub fn trace(a: TraceArgs) -> Outcome {
    let (tally, batch_size, z) = match &a.from_checkpoint {
        Some(p) => {
            let ckpt = Checkpoint::load(p)?;
            let tally = hsprob::estimator::Tally::from_records(ckpt.batches.iter().copied());
            if tally.trials == 0 {
                return Err(Failure::Config("checkpoint holds no completed batches".into()));
            }
            (tally, ckpt.batch_size, a.z)
        }
        None => {
            let config = config_of(shape_of(&a.shape)?, &a.run, DEFAULT_TRIALS, a.z)?;
            let mut out = open_out(a.out.as_deref())?;
            let report = Estimator::new(config).workers(a.run.workers).run()?;
            summarize(&report);
            let rows = emit_trace(&report.tally(), a.stride.unwrap_or(config.batch_size).max(1), config.z);
            write_trace_csv(&rows, &mut out)?;
            return Ok(());
        }
    };
    let mut out = open_out(a.out.as_deref())?;
    write_trace_csv(&emit_trace(&tally, a.stride.unwrap_or(batch_size).max(1), z), &mut out)?;
    Ok(())
}
