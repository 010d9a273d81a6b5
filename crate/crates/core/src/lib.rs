//! Cross-rollup arbitrage between two constant-product pools under atomic
//! (shared-sequencer) and independent sequencing.
//!
//! * [`cpmm`]: swap quotes, end prices, closed-form optimal sizing.
//! * [`engine`]: per-regime liquidity deltas, the four-outcome profit
//!   difference, and its expectation under independent leg failures.
//! * [`stable`]: stable-asset bundle variant with transaction-fee costs.
//! * [`monte_carlo`]: seeded, chunk-parallel sampling estimator.
//! * [`sweep`]: `(P_ext, f_a, f_b)` grids and their CSV form.

pub mod cli;
pub mod cpmm;
pub mod engine;
pub mod error;
pub mod monte_carlo;
pub mod scenario;
pub mod stable;
pub mod sweep;

pub use cpmm::{
    build_trade_plan, end_price_after_x_in, end_price_after_y_in, optimal_delta_y_b, spot_price,
    swap_x_for_y, swap_y_for_x, ArbOpportunity, PoolState, SizingRule, TradePlan,
};
pub use engine::{
    enumerate_expected_diff, expected_profit_diff, expected_profit_diff_equal_f,
    profit_diff_outcome, ExternalPrice, FailureModel, FailureOutcome, LiquidityDelta, Regime,
};
pub use error::{ModelError, Result};
