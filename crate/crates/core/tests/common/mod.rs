#![allow(dead_code)]

use atomic_arb::{build_trade_plan, spot_price, ArbOpportunity, PoolState, SizingRule, TradePlan};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FEES: [f64; 4] = [0.0, 0.0005, 0.003, 0.01];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + rng.random::<f64>() * (hi - lo)
}

pub fn random_fee(rng: &mut ChaCha8Rng) -> f64 {
    FEES[rng.random_range(0..FEES.len())]
}

pub fn random_pool(rng: &mut ChaCha8Rng, lo: f64, hi: f64, fee: f64) -> PoolState {
    PoolState::new(log_uniform(rng, lo, hi), log_uniform(rng, lo, hi), fee).unwrap()
}

/// Independent log-uniform reserves in `[lo, hi]`, oriented so pool A is the
/// expensive one, profitable under `rule`.
pub fn random_opportunity(
    rng: &mut ChaCha8Rng,
    lo: f64,
    hi: f64,
    rule: SizingRule,
) -> (ArbOpportunity, TradePlan) {
    loop {
        let fee = random_fee(rng);
        let (p, q) = (random_pool(rng, lo, hi, fee), random_pool(rng, lo, hi, fee));
        let (a, b) = if spot_price(&p) > spot_price(&q) {
            (p, q)
        } else {
            (q, p)
        };
        let Ok(opp) = ArbOpportunity::new(a, b) else {
            continue;
        };
        if let Ok(plan) = build_trade_plan(&opp, rule) {
            return (opp, plan);
        }
    }
}

/// Price gap drawn just above the fee threshold: `P_A = P_B (1 + u) / (1-f)^2`
/// with `u` log-uniform in `[1e-4, 1]`.
pub fn near_threshold_opportunity(
    rng: &mut ChaCha8Rng,
    rule: SizingRule,
) -> (ArbOpportunity, TradePlan) {
    loop {
        let fee = FEES[rng.random_range(1..FEES.len())];
        let b = random_pool(rng, 1e2, 1e9, fee);
        let ratio = (1.0 + log_uniform(rng, 1e-4, 1.0)) / ((1.0 - fee) * (1.0 - fee));
        let x_a = log_uniform(rng, 1e2, 1e9);
        let a = PoolState::new(x_a, x_a * spot_price(&b) * ratio, fee).unwrap();
        let Ok(opp) = ArbOpportunity::new(a, b) else {
            continue;
        };
        if let Ok(plan) = build_trade_plan(&opp, rule) {
            return (opp, plan);
        }
    }
}

pub fn baseline_opportunity() -> ArbOpportunity {
    ArbOpportunity::new(
        PoolState::from_price(1.01, 100_000.0, 0.0005).unwrap(),
        PoolState::from_price(1.0, 100_000.0, 0.0005).unwrap(),
    )
    .unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
