//! Variant of the model where the arbitrageur holds only a stable asset and
//! wraps each pool swap in a bundle that buys in and sells out against it,
//! paying transaction fees that depend on whether the bundle lands.
//!
//! All amounts here are stable-denominated.

use serde::{Deserialize, Serialize};

use crate::cpmm::{spot_price, ArbOpportunity, TradePlan};
use crate::engine::{FailureModel, FailureOutcome, Regime};
use crate::error::{ModelError, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeeMode {
    /// Every stable leg is scaled by `(1 - f_stable)`, buy legs included.
    #[default]
    AsPrinted,
    /// Buy legs are divided by `(1 - f_stable)`, so the fee raises the cost.
    CorrectedBuySide,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableParams {
    p_y: f64,
    f_stable: f64,
    fee_mode: FeeMode,
}

impl StableParams {
    pub fn new(p_y: f64, f_stable: f64, fee_mode: FeeMode) -> Result<Self> {
        if !(p_y.is_finite() && p_y > 0.0) {
            return Err(ModelError::invalid(format!(
                "p_y must be finite and > 0, got {p_y}"
            )));
        }
        if !(0.0..1.0).contains(&f_stable) {
            return Err(ModelError::invalid(format!(
                "f_stable must lie in [0, 1), got {f_stable}"
            )));
        }
        Ok(Self {
            p_y,
            f_stable,
            fee_mode,
        })
    }

    pub fn p_y(&self) -> f64 {
        self.p_y
    }

    pub fn f_stable(&self) -> f64 {
        self.f_stable
    }

    pub fn fee_mode(&self) -> FeeMode {
        self.fee_mode
    }
}

/// Stable paid (`*_out`) and received (`*_in`) by each bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BundleLegs {
    pub s_b_out: f64,
    pub s_b_in: f64,
    pub s_a_out: f64,
    pub s_a_in: f64,
}

/// Transaction-fee cost of each bundle on success and on failure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GasCostModel {
    g_a_success: f64,
    g_a_fail: f64,
    g_b_success: f64,
    g_b_fail: f64,
}

impl GasCostModel {
    pub fn new(g_a_success: f64, g_a_fail: f64, g_b_success: f64, g_b_fail: f64) -> Result<Self> {
        for (name, v) in [
            ("g_a_success", g_a_success),
            ("g_a_fail", g_a_fail),
            ("g_b_success", g_b_success),
            ("g_b_fail", g_b_fail),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ModelError::invalid(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(Self {
            g_a_success,
            g_a_fail,
            g_b_success,
            g_b_fail,
        })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    fn cost(&self, bundle: Bundle, failed: bool) -> f64 {
        match (bundle, failed) {
            (Bundle::A, false) => self.g_a_success,
            (Bundle::A, true) => self.g_a_fail,
            (Bundle::B, false) => self.g_b_success,
            (Bundle::B, true) => self.g_b_fail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Bundle {
    A,
    B,
}

/// X is priced per rollup at `P_i * P^Y` using the pools' initial spot prices.
/// Bundle B sells its X at rollup A's price and bundle A buys at rollup B's
/// price, following the formulas rather than the accompanying prose.
pub fn bundle_legs(plan: &TradePlan, opp: &ArbOpportunity, sp: &StableParams) -> BundleLegs {
    let keep = 1.0 - sp.f_stable;
    let px_a = spot_price(opp.pool_a()) * sp.p_y;
    let px_b = spot_price(opp.pool_b()) * sp.p_y;
    let buy = |amount: f64| match sp.fee_mode {
        FeeMode::AsPrinted => amount * keep,
        FeeMode::CorrectedBuySide => amount / keep,
    };
    BundleLegs {
        s_b_out: buy(plan.delta_y_b * sp.p_y),
        s_b_in: plan.delta_x * keep * px_a,
        s_a_out: buy(plan.delta_x * px_b),
        s_a_in: plan.delta_y_a * keep * sp.p_y,
    }
}

pub fn pure_bundle_profit(legs: &BundleLegs, which: Bundle, failed: bool) -> f64 {
    if failed {
        return 0.0;
    }
    match which {
        Bundle::A => legs.s_a_in - legs.s_a_out,
        Bundle::B => legs.s_b_in - legs.s_b_out,
    }
}

pub fn regime_pure_profit(legs: &BundleLegs, outcome: FailureOutcome, regime: Regime) -> f64 {
    let both = |o: FailureOutcome| {
        pure_bundle_profit(legs, Bundle::A, o.a_failed)
            + pure_bundle_profit(legs, Bundle::B, o.b_failed)
    };
    match regime {
        Regime::Atomic if outcome.neither_failed() => both(outcome),
        Regime::Atomic => 0.0,
        Regime::NonAtomic => both(outcome),
    }
}

/// Under the shared sequencer the combined cost is the plain sum of the two
/// per-rollup costs; it just switches to the failure costs together.
pub fn regime_cost(g: &GasCostModel, outcome: FailureOutcome, regime: Regime) -> f64 {
    match regime {
        Regime::Atomic => {
            let failed = !outcome.neither_failed();
            g.cost(Bundle::A, failed) + g.cost(Bundle::B, failed)
        }
        Regime::NonAtomic => {
            g.cost(Bundle::A, outcome.a_failed) + g.cost(Bundle::B, outcome.b_failed)
        }
    }
}

/// `(R_atomic - C_atomic) - (R_non_atomic - C_non_atomic)` for one outcome.
pub fn net_diff_outcome(legs: &BundleLegs, g: &GasCostModel, outcome: FailureOutcome) -> f64 {
    let net = |regime| regime_pure_profit(legs, outcome, regime) - regime_cost(g, outcome, regime);
    net(Regime::Atomic) - net(Regime::NonAtomic)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableOutcomeTerm {
    pub outcome: FailureOutcome,
    pub probability: f64,
    pub profit_diff: f64,
    pub cost_diff: f64,
    pub net_diff: f64,
}

pub fn stable_outcome_terms(
    legs: &BundleLegs,
    g: &GasCostModel,
    fm: FailureModel,
) -> [StableOutcomeTerm; 4] {
    FailureOutcome::ALL.map(|outcome| StableOutcomeTerm {
        outcome,
        probability: fm.probability(outcome),
        profit_diff: regime_pure_profit(legs, outcome, Regime::Atomic)
            - regime_pure_profit(legs, outcome, Regime::NonAtomic),
        cost_diff: regime_cost(g, outcome, Regime::Atomic)
            - regime_cost(g, outcome, Regime::NonAtomic),
        net_diff: net_diff_outcome(legs, g, outcome),
    })
}

/// Exact expectation of the net regime difference over the four outcomes.
pub fn expected_net_diff_stable(legs: &BundleLegs, g: &GasCostModel, fm: FailureModel) -> f64 {
    stable_outcome_terms(legs, g, fm)
        .iter()
        .map(|t| t.probability * t.net_diff)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmm::{build_trade_plan, PoolState, SizingRule};
    use crate::engine::{expected_profit_diff, ExternalPrice};

    fn baseline() -> (ArbOpportunity, TradePlan) {
        let opp = ArbOpportunity::new(
            PoolState::from_price(1.01, 100_000.0, 0.0005).unwrap(),
            PoolState::from_price(1.0, 100_000.0, 0.0005).unwrap(),
        )
        .unwrap();
        let plan = build_trade_plan(&opp, SizingRule::FeeAdjusted).unwrap();
        (opp, plan)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    const FF: FailureOutcome = FailureOutcome::new(false, false);
    const FT: FailureOutcome = FailureOutcome::new(false, true);
    const TF: FailureOutcome = FailureOutcome::new(true, false);
    const TT: FailureOutcome = FailureOutcome::new(true, true);

    #[test]
    fn params_validation() {
        assert!(StableParams::new(0.0, 0.0, FeeMode::AsPrinted).is_err());
        assert!(StableParams::new(1.0, 1.0, FeeMode::AsPrinted).is_err());
        assert!(GasCostModel::new(0.0, -1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn legs_without_fee_or_numeraire() {
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.0, 0.0, FeeMode::AsPrinted).unwrap(),
        );
        assert_eq!(legs.s_b_out, plan.delta_y_b);
        assert_eq!(legs.s_b_in, plan.delta_x * spot_price(opp.pool_a()));
        assert_eq!(legs.s_a_out, plan.delta_x * spot_price(opp.pool_b()));
        assert_eq!(legs.s_a_in, plan.delta_y_a);
    }

    #[test]
    fn as_printed_sell_leg() {
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(2.5, 0.001, FeeMode::AsPrinted).unwrap(),
        );
        assert!(close(legs.s_a_in, plan.delta_y_a * 0.999 * 2.5, 1e-15));
    }

    #[test]
    fn fee_modes_differ_on_buy_legs_only() {
        let (opp, plan) = baseline();
        let fs = 0.003;
        let printed = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.7, fs, FeeMode::AsPrinted).unwrap(),
        );
        let fixed = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.7, fs, FeeMode::CorrectedBuySide).unwrap(),
        );
        assert_eq!(printed.s_b_in, fixed.s_b_in);
        assert_eq!(printed.s_a_in, fixed.s_a_in);
        let k2 = (1.0 - fs) * (1.0 - fs);
        assert!(close(printed.s_b_out, fixed.s_b_out * k2, 1e-14));
        assert!(close(printed.s_a_out, fixed.s_a_out * k2, 1e-14));
    }

    #[test]
    fn bundle_profits() {
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.0, 0.0, FeeMode::AsPrinted).unwrap(),
        );
        assert_eq!(pure_bundle_profit(&legs, Bundle::A, true), 0.0);
        assert_eq!(
            pure_bundle_profit(&legs, Bundle::B, false),
            legs.s_b_in - legs.s_b_out
        );
        assert_eq!(
            pure_bundle_profit(&legs, Bundle::A, false),
            plan.delta_y_a - plan.delta_x * spot_price(opp.pool_b())
        );
    }

    #[test]
    fn regime_profit_cases() {
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.3, 0.002, FeeMode::AsPrinted).unwrap(),
        );
        assert_eq!(
            regime_pure_profit(&legs, FF, Regime::Atomic),
            regime_pure_profit(&legs, FF, Regime::NonAtomic)
        );
        assert_eq!(regime_pure_profit(&legs, TF, Regime::Atomic), 0.0);
        assert_eq!(
            regime_pure_profit(&legs, TF, Regime::NonAtomic),
            legs.s_b_in - legs.s_b_out
        );
        assert_eq!(regime_pure_profit(&legs, TT, Regime::Atomic), 0.0);
        assert_eq!(regime_pure_profit(&legs, TT, Regime::NonAtomic), 0.0);
    }

    #[test]
    fn regime_cost_cases() {
        let g = GasCostModel::new(1.0, 0.25, 2.0, 0.5).unwrap();
        assert_eq!(
            regime_cost(&g, FF, Regime::Atomic),
            regime_cost(&g, FF, Regime::NonAtomic)
        );
        assert_eq!(regime_cost(&g, FT, Regime::Atomic), 0.25 + 0.5);
        assert_eq!(regime_cost(&g, FT, Regime::NonAtomic), 1.0 + 0.5);
        assert_eq!(regime_cost(&g, TF, Regime::NonAtomic), 0.25 + 2.0);
        assert_eq!(
            regime_cost(&g, TT, Regime::Atomic),
            regime_cost(&g, TT, Regime::NonAtomic)
        );
    }

    #[test]
    fn no_failures_means_no_difference() {
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.3, 0.002, FeeMode::AsPrinted).unwrap(),
        );
        let g = GasCostModel::new(1.0, 0.25, 2.0, 0.5).unwrap();
        assert_eq!(
            expected_net_diff_stable(&legs, &g, FailureModel::new(0.0, 0.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn matches_engine_on_matched_valuation() {
        // With no stable fee, no gas and P^Y = 1, a lone bundle B is valued at
        // P_A and a lone bundle A at P_B, so each single-failure configuration
        // reduces to the engine expectation at that external price.
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.0, 0.0, FeeMode::AsPrinted).unwrap(),
        );
        let g = GasCostModel::zero();
        for f_a in [0.1, 0.4, 0.9] {
            let fm = FailureModel::new(f_a, 0.0).unwrap();
            let engine = expected_profit_diff(
                &plan,
                fm,
                ExternalPrice::new(spot_price(opp.pool_a())).unwrap(),
            );
            assert!(close(
                expected_net_diff_stable(&legs, &g, fm),
                engine,
                1e-12
            ));
        }
        for f_b in [0.1, 0.4, 0.9] {
            let fm = FailureModel::new(0.0, f_b).unwrap();
            let engine = expected_profit_diff(
                &plan,
                fm,
                ExternalPrice::new(spot_price(opp.pool_b())).unwrap(),
            );
            assert!(close(
                expected_net_diff_stable(&legs, &g, fm),
                engine,
                1e-12
            ));
        }
    }

    #[test]
    fn symmetric_success_gas() {
        let (opp, plan) = baseline();
        let legs = bundle_legs(
            &plan,
            &opp,
            &StableParams::new(1.0, 0.0, FeeMode::AsPrinted).unwrap(),
        );
        let c = 0.8;
        let g = GasCostModel::new(c, 0.0, c, 0.0).unwrap();
        let fm = FailureModel::new(0.3, 0.6).unwrap();
        let with_gas = expected_net_diff_stable(&legs, &g, fm);
        let without = expected_net_diff_stable(&legs, &GasCostModel::zero(), fm);
        // Hand enumeration: atomic saves c on each single-failure outcome.
        let expected_cost_gap = c * (0.3 * (1.0 - 0.6) + 0.6 * (1.0 - 0.3));
        assert!(close(with_gas - without, expected_cost_gap, 1e-12));
    }
}
