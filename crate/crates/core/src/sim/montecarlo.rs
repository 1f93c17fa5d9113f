use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::statistics::{Data, OrderStatistics, Statistics};

use crate::error::{invalid, Result};

/// Independent generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Run `trials` independent trials, each on its own rng stream, and return
/// results in trial order. The output does not depend on `workers`
/// (0 means one per core).
pub fn run_trials<T, F>(seed: u64, trials: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    let work = || {
        (0..trials)
            .into_par_iter()
            .map(|i| f(i, &mut trial_rng(seed, i)))
            .collect::<Result<Vec<T>>>()
    };
    if workers == 0 {
        return work();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(format!("cannot start {workers} workers: {e}")))?
        .install(work)
}

/// Sample statistics with a normal 95% interval for the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub min: f64,
    pub median: f64,
    pub q95: f64,
    pub max: f64,
}

impl Summary {
    pub fn from_samples(xs: &[f64]) -> Summary {
        let count = xs.len();
        if count == 0 {
            let nan = f64::NAN;
            return Summary {
                count,
                mean: nan,
                variance: nan,
                std_err: nan,
                ci_low: nan,
                ci_high: nan,
                min: nan,
                median: nan,
                q95: nan,
                max: nan,
            };
        }
        let mean = xs.mean();
        let variance = if count > 1 { xs.variance() } else { 0.0 };
        let std_err = (variance / count as f64).sqrt();
        let mut data = Data::new(xs.to_vec());
        Summary {
            count,
            mean,
            variance,
            std_err,
            ci_low: mean - 1.96 * std_err,
            ci_high: mean + 1.96 * std_err,
            min: xs.min(),
            median: data.median(),
            q95: data.quantile(0.95),
            max: xs.max(),
        }
    }
}

/// Success frequency with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub p: f64,
    pub std_err: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Proportion {
        let p = if trials == 0 { f64::NAN } else { successes as f64 / trials as f64 };
        let std_err = (p * (1.0 - p) / trials as f64).sqrt();
        Proportion {
            successes,
            trials,
            p,
            std_err,
            ci_low: (p - 1.96 * std_err).max(0.0),
            ci_high: (p + 1.96 * std_err).min(1.0),
        }
    }

    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Proportion {
        let (mut s, mut n) = (0, 0);
        for f in flags {
            s += f as u64;
            n += 1;
        }
        Proportion::new(s, n)
    }

    /// Whether `p0` lies within `k` binomial standard deviations (under `p0`)
    /// of the observed frequency.
    pub fn within_sigmas(&self, p0: f64, k: f64) -> bool {
        let sd = (p0 * (1.0 - p0) / self.trials as f64).sqrt();
        (self.p - p0).abs() <= k * sd + 1e-12
    }
}
