//! Rough per-trial cost of sampling plus the PPT test for the standard shapes.

use std::time::Instant;

use hsprob::density::DensitySampler;
use hsprob::ppt::ppt_verdict;
use hsprob::randmat::GaussianScalar;
use hsprob::{BipartiteShape, Complex64, Field, RngStream, Tolerances};

fn time<T: GaussianScalar>(shape: BipartiteShape, trials: u64) {
    let mut sampler = DensitySampler::new(shape, Tolerances::DEFAULT);
    let mut s = RngStream::new(1, 0);
    let start = Instant::now();
    let mut hits = 0u64;
    for _ in 0..trials {
        let rho = sampler.sample::<T>(&mut s).expect("sample");
        if ppt_verdict(&rho, 1e-10).expect("verdict").is_ppt {
            hits += 1;
        }
    }
    let per = start.elapsed().as_secs_f64() / trials as f64;
    println!(
        "{shape:<24} {:>8.2} us/trial  p_hat = {:.5}",
        per * 1e6,
        hits as f64 / trials as f64
    );
}

fn main() {
    let trials: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    for (m, n, k, field) in [
        (2, 2, 4, Field::Complex),
        (2, 2, 4, Field::Real),
        (2, 3, 4, Field::Real),
        (2, 3, 6, Field::Complex),
        (2, 3, 4, Field::Complex),
        (2, 4, 8, Field::Complex),
    ] {
        let shape = BipartiteShape::new(m, n, k, field).expect("shape");
        match field {
            Field::Real => time::<f64>(shape, trials),
            Field::Complex => time::<Complex64>(shape, trials),
        }
    }
}
