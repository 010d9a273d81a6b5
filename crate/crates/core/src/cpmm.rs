//! Constant-product pool math.
//!
//! Fees are charged outside the reserves: of a payment `d`, only `(1 - f) * d`
//! enters the pool and the product of the reserves is conserved on that
//! amount. All prices are quoted in token Y per token X.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoolState {
    reserve_x: f64,
    reserve_y: f64,
    fee: f64,
}

impl PoolState {
    pub fn new(reserve_x: f64, reserve_y: f64, fee: f64) -> Result<Self> {
        if !(reserve_x.is_finite() && reserve_x > 0.0) {
            return Err(ModelError::invalid(format!(
                "reserve_x must be finite and > 0, got {reserve_x}"
            )));
        }
        if !(reserve_y.is_finite() && reserve_y > 0.0) {
            return Err(ModelError::invalid(format!(
                "reserve_y must be finite and > 0, got {reserve_y}"
            )));
        }
        if !(0.0..1.0).contains(&fee) {
            return Err(ModelError::invalid(format!(
                "fee must lie in [0, 1), got {fee}"
            )));
        }
        Ok(Self {
            reserve_x,
            reserve_y,
            fee,
        })
    }

    /// Pool whose spot price is `price` with `reserve_y` units of Y.
    pub fn from_price(price: f64, reserve_y: f64, fee: f64) -> Result<Self> {
        if !(price.is_finite() && price > 0.0) {
            return Err(ModelError::invalid(format!(
                "price must be finite and > 0, got {price}"
            )));
        }
        Self::new(reserve_y / price, reserve_y, fee)
    }

    pub fn reserve_x(&self) -> f64 {
        self.reserve_x
    }

    pub fn reserve_y(&self) -> f64 {
        self.reserve_y
    }

    pub fn fee(&self) -> f64 {
        self.fee
    }

    fn keep(&self) -> f64 {
        1.0 - self.fee
    }
}

pub fn spot_price(pool: &PoolState) -> f64 {
    pool.reserve_y / pool.reserve_x
}

fn check_amount(name: &str, amount: f64) -> Result<()> {
    if amount.is_finite() && amount >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::invalid(format!(
            "{name} must be finite and >= 0, got {amount}"
        )))
    }
}

/// X received for paying `delta_y` of Y into the pool.
pub fn swap_y_for_x(pool: &PoolState, delta_y: f64) -> Result<f64> {
    check_amount("delta_y", delta_y)?;
    let net_in = pool.keep() * delta_y;
    Ok(pool.reserve_x * net_in / (pool.reserve_y + net_in))
}

/// Y received for paying `delta_x` of X into the pool.
pub fn swap_x_for_y(pool: &PoolState, delta_x: f64) -> Result<f64> {
    check_amount("delta_x", delta_x)?;
    let net_in = pool.keep() * delta_x;
    Ok(pool.reserve_y * net_in / (pool.reserve_x + net_in))
}

/// Spot price after a Y-in trade: `[y + (1-f) dy]^2 / (x y)`.
pub fn end_price_after_y_in(pool: &PoolState, delta_y: f64) -> Result<f64> {
    check_amount("delta_y", delta_y)?;
    let y_new = pool.reserve_y + pool.keep() * delta_y;
    Ok(y_new * y_new / (pool.reserve_x * pool.reserve_y))
}

/// Spot price after an X-in trade: `x y / [x + (1-f) dx]^2`.
pub fn end_price_after_x_in(pool: &PoolState, delta_x: f64) -> Result<f64> {
    check_amount("delta_x", delta_x)?;
    let x_new = pool.reserve_x + pool.keep() * delta_x;
    Ok(pool.reserve_x * pool.reserve_y / (x_new * x_new))
}

/// Two pools of the same pair, oriented so pool A is the expensive one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArbOpportunity {
    pool_a: PoolState,
    pool_b: PoolState,
}

impl ArbOpportunity {
    /// Rejects (does not swap) pools where `P_A < P_B`, and pools with
    /// differing fees. Equal prices are `NoOpportunity`.
    pub fn new(pool_a: PoolState, pool_b: PoolState) -> Result<Self> {
        let (pa, pb) = (spot_price(&pool_a), spot_price(&pool_b));
        if pa == pb {
            return Err(ModelError::NoOpportunity { delta_y_b: 0.0 });
        }
        if pa < pb {
            return Err(ModelError::invalid(format!(
                "pool A must be the higher-priced pool (P_A = {pa}, P_B = {pb})"
            )));
        }
        if pool_a.fee != pool_b.fee {
            return Err(ModelError::invalid(format!(
                "both pools must charge the same fee ({} vs {})",
                pool_a.fee, pool_b.fee
            )));
        }
        Ok(Self { pool_a, pool_b })
    }

    pub fn pool_a(&self) -> &PoolState {
        &self.pool_a
    }

    pub fn pool_b(&self) -> &PoolState {
        &self.pool_b
    }

    pub fn fee(&self) -> f64 {
        self.pool_a.fee
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizingRule {
    /// Optimum where `(1-f)^2 P_A^end = P_B^end`; the exact maximizer of
    /// `dy_A - dy_B`.
    #[default]
    FeeAdjusted,
    /// Optimum where `P_A^end = P_B^end`, ignoring the fee at the margin.
    PoolPriceEquality,
}

/// Closed-form size of the Y leg paid into pool B.
///
/// `NoOpportunity` when the result is not strictly positive.
pub fn optimal_delta_y_b(opp: &ArbOpportunity, rule: SizingRule) -> Result<f64> {
    let (a, b) = (&opp.pool_a, &opp.pool_b);
    let keep = 1.0 - opp.fee();
    let root = (a.reserve_x * a.reserve_y * b.reserve_x * b.reserve_y).sqrt();
    let root_factor = match rule {
        SizingRule::FeeAdjusted => keep,
        SizingRule::PoolPriceEquality => 1.0,
    };
    let numerator = root_factor * root - a.reserve_x * b.reserve_y;
    let denominator = keep * a.reserve_x + keep * keep * b.reserve_x;
    let delta_y_b = numerator / denominator;
    if delta_y_b > 0.0 {
        Ok(delta_y_b)
    } else {
        Err(ModelError::NoOpportunity { delta_y_b })
    }
}

/// The sized two-pool trade: pay Y into B, route the X received into A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradePlan {
    pub delta_y_b: f64,
    /// Shared middle leg: X out of pool B equals X into pool A.
    pub delta_x: f64,
    pub delta_y_a: f64,
    pub price_star_a: f64,
    pub price_star_b: f64,
    pub end_price_a: f64,
    pub end_price_b: f64,
}

impl TradePlan {
    /// Y-denominated profit when both legs execute.
    pub fn no_failure_profit(&self) -> f64 {
        self.delta_y_a - self.delta_y_b
    }
}

pub fn build_trade_plan(opp: &ArbOpportunity, rule: SizingRule) -> Result<TradePlan> {
    let delta_y_b = optimal_delta_y_b(opp, rule)?;
    trade_plan_for(opp, delta_y_b)
}

/// Plan for an arbitrary (not necessarily optimal) Y input into pool B.
pub fn trade_plan_for(opp: &ArbOpportunity, delta_y_b: f64) -> Result<TradePlan> {
    let delta_x = swap_y_for_x(&opp.pool_b, delta_y_b)?;
    let delta_y_a = swap_x_for_y(&opp.pool_a, delta_x)?;
    Ok(TradePlan {
        delta_y_b,
        delta_x,
        delta_y_a,
        price_star_a: delta_y_a / delta_x,
        price_star_b: delta_y_b / delta_x,
        end_price_a: end_price_after_x_in(&opp.pool_a, delta_x)?,
        end_price_b: end_price_after_y_in(&opp.pool_b, delta_y_b)?,
    })
}

/// `dy_A(dx_B(dy)) - dy`, the no-failure profit of paying `delta_y` into B.
pub fn round_trip_profit(opp: &ArbOpportunity, delta_y: f64) -> Result<f64> {
    let dx = swap_y_for_x(&opp.pool_b, delta_y)?;
    Ok(swap_x_for_y(&opp.pool_a, dx)? - delta_y)
}
