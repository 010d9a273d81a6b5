//! Sampling estimator of the expected regime profit difference.
//!
//! Reproducibility: the sample index space is cut into fixed chunks of
//! [`CHUNK_SIZE`] draws. Chunk `k` owns a `ChaCha8Rng` seeded with
//! [`chunk_seed`]`(seed, k)`, and per-chunk statistics are merged in chunk
//! order. The estimate is therefore bit-identical for any worker count.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cpmm::TradePlan;
use crate::engine::{profit_diff_outcome, ExternalPrice, FailureModel, FailureOutcome};
use crate::error::{ModelError, Result};

/// Recorded with every estimate.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.10), chunk seed = splitmix64 mix";

pub const CHUNK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    samples: u64,
    seed: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(ModelError::invalid("samples must be >= 1"));
        }
        Ok(Self { samples, seed })
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub generator: &'static str,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(seed ^ splitmix64(chunk))`.
pub fn chunk_seed(seed: u64, chunk: u64) -> u64 {
    splitmix64(seed ^ splitmix64(chunk))
}

/// Running count / mean / sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    // Chan et al. pairwise combination.
    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb, nf) = (self.n as f64, other.n as f64, n as f64);
        Moments {
            n,
            mean: self.mean + delta * nb / nf,
            m2: self.m2 + other.m2 + delta * delta * na * nb / nf,
        }
    }
}

fn run_chunk(
    plan: &TradePlan,
    fm: FailureModel,
    p: ExternalPrice,
    seed: u64,
    chunk: u64,
    len: u64,
) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, chunk));
    let mut m = Moments::default();
    for _ in 0..len {
        // random::<f64>() is in [0, 1): p = 0 never fails, p = 1 always does.
        let a_failed = rng.random::<f64>() < fm.f_a();
        let b_failed = rng.random::<f64>() < fm.f_b();
        m.push(profit_diff_outcome(
            plan,
            FailureOutcome::new(a_failed, b_failed),
            p,
        ));
    }
    m
}

/// Runs on the current rayon pool.
pub fn simulate_profit_diff(
    plan: &TradePlan,
    fm: FailureModel,
    p: ExternalPrice,
    cfg: McConfig,
) -> McEstimate {
    let n_chunks = cfg.samples.div_ceil(CHUNK_SIZE);
    let chunks: Vec<Moments> = (0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let len = CHUNK_SIZE.min(cfg.samples - k * CHUNK_SIZE);
            run_chunk(plan, fm, p, cfg.seed, k, len)
        })
        .collect();
    let total = chunks.into_iter().fold(Moments::default(), Moments::merge);

    let std_error = if total.n > 1 {
        let variance = (total.m2 / (total.n - 1) as f64).max(0.0);
        (variance / total.n as f64).sqrt()
    } else {
        0.0
    };
    McEstimate {
        mean: total.mean,
        std_error,
        samples: total.n,
        seed: cfg.seed,
        generator: GENERATOR,
    }
}

/// Same estimate on a dedicated pool of `threads` workers.
pub fn simulate_profit_diff_with_threads(
    plan: &TradePlan,
    fm: FailureModel,
    p: ExternalPrice,
    cfg: McConfig,
    threads: usize,
) -> Result<McEstimate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ModelError::invalid(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(|| simulate_profit_diff(plan, fm, p, cfg)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmm::{build_trade_plan, ArbOpportunity, PoolState, SizingRule};
    use crate::engine::expected_profit_diff;

    fn baseline_plan() -> TradePlan {
        let opp = ArbOpportunity::new(
            PoolState::from_price(1.01, 100_000.0, 0.0005).unwrap(),
            PoolState::from_price(1.0, 100_000.0, 0.0005).unwrap(),
        )
        .unwrap();
        build_trade_plan(&opp, SizingRule::FeeAdjusted).unwrap()
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(McConfig::new(0, 1).is_err());
    }

    #[test]
    fn no_failures_is_exactly_zero() {
        let plan = baseline_plan();
        let est = simulate_profit_diff(
            &plan,
            FailureModel::new(0.0, 0.0).unwrap(),
            ExternalPrice::new(1.005).unwrap(),
            McConfig::new(100_000, 42).unwrap(),
        );
        assert_eq!(est.mean, 0.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.samples, 100_000);
    }

    #[test]
    fn certain_outcome_is_exact() {
        let plan = baseline_plan();
        let p = ExternalPrice::new(1.005).unwrap();
        let est = simulate_profit_diff(
            &plan,
            FailureModel::new(1.0, 0.0).unwrap(),
            p,
            McConfig::new(200_001, 9).unwrap(),
        );
        assert_eq!(est.mean, plan.delta_y_b - plan.delta_x * 1.005);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn single_sample_has_zero_error() {
        let plan = baseline_plan();
        let est = simulate_profit_diff(
            &plan,
            FailureModel::new(0.5, 0.5).unwrap(),
            ExternalPrice::new(1.005).unwrap(),
            McConfig::new(1, 3).unwrap(),
        );
        assert_eq!(est.samples, 1);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000)
            .map(|i| ((i * 37) % 101) as f64 * 0.25 - 3.0)
            .collect();
        let mut seq = Moments::default();
        xs.iter().for_each(|&x| seq.push(x));
        let (l, r) = xs.split_at(377);
        let mut a = Moments::default();
        let mut b = Moments::default();
        l.iter().for_each(|&x| a.push(x));
        r.iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert_eq!(m.n, seq.n);
        assert!((m.mean - seq.mean).abs() < 1e-12);
        assert!((m.m2 - seq.m2).abs() < 1e-9 * seq.m2);
    }

    #[test]
    fn baseline_estimate_is_consistent() {
        let plan = baseline_plan();
        let fm = FailureModel::new(0.3, 0.6).unwrap();
        let p = ExternalPrice::new(1.005).unwrap();
        let est = simulate_profit_diff(&plan, fm, p, McConfig::new(1_000_000, 2024).unwrap());
        let analytic = expected_profit_diff(&plan, fm, p);
        assert!(est.std_error > 0.0);
        assert!(
            (est.mean - analytic).abs() <= 4.0 * est.std_error,
            "{est:?} vs {analytic}"
        );
    }

    #[test]
    fn chunk_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|k| chunk_seed(7, k)).collect();
        assert_eq!(s.len(), 1000);
        assert_ne!(chunk_seed(7, 0), chunk_seed(8, 0));
    }
}
