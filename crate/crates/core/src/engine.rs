//! Profit accounting under atomic and independent (non-atomic) sequencing.
//!
//! Everything is Y-denominated: residual X inventory is valued at an
//! exogenous external price.

use serde::Serialize;

use crate::cpmm::TradePlan;
use crate::error::{ModelError, Result};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ModelError::invalid(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

/// Independent Bernoulli failure probabilities of the two legs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FailureModel {
    f_a: f64,
    f_b: f64,
}

impl FailureModel {
    pub fn new(f_a: f64, f_b: f64) -> Result<Self> {
        check_probability("f_a", f_a)?;
        check_probability("f_b", f_b)?;
        Ok(Self { f_a, f_b })
    }

    pub fn f_a(&self) -> f64 {
        self.f_a
    }

    pub fn f_b(&self) -> f64 {
        self.f_b
    }

    /// Joint probability of `outcome` under independence.
    pub fn probability(&self, outcome: FailureOutcome) -> f64 {
        let pa = if outcome.a_failed {
            self.f_a
        } else {
            1.0 - self.f_a
        };
        let pb = if outcome.b_failed {
            self.f_b
        } else {
            1.0 - self.f_b
        };
        pa * pb
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FailureOutcome {
    pub a_failed: bool,
    pub b_failed: bool,
}

impl FailureOutcome {
    pub const fn new(a_failed: bool, b_failed: bool) -> Self {
        Self { a_failed, b_failed }
    }

    /// The four outcomes in the order (ok, ok), (ok, fail), (fail, ok), (fail, fail).
    pub const ALL: [FailureOutcome; 4] = [
        FailureOutcome::new(false, false),
        FailureOutcome::new(false, true),
        FailureOutcome::new(true, false),
        FailureOutcome::new(true, true),
    ];

    pub fn neither_failed(&self) -> bool {
        !self.a_failed && !self.b_failed
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExternalPrice(f64);

impl ExternalPrice {
    pub fn new(p_ext: f64) -> Result<Self> {
        if p_ext.is_finite() && p_ext > 0.0 {
            Ok(Self(p_ext))
        } else {
            Err(ModelError::invalid(format!(
                "external price must be finite and > 0, got {p_ext}"
            )))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Signed change in the arbitrageur's X and Y holdings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LiquidityDelta {
    pub d_x: f64,
    pub d_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Atomic,
    NonAtomic,
}

pub fn liquidity_delta_non_atomic(plan: &TradePlan, outcome: FailureOutcome) -> LiquidityDelta {
    let a_ok = 1.0 - indicator(outcome.a_failed);
    let b_ok = 1.0 - indicator(outcome.b_failed);
    LiquidityDelta {
        d_x: plan.delta_x * b_ok - plan.delta_x * a_ok,
        d_y: plan.delta_y_a * a_ok - plan.delta_y_b * b_ok,
    }
}

pub fn liquidity_delta_atomic(plan: &TradePlan, outcome: FailureOutcome) -> LiquidityDelta {
    if outcome.neither_failed() {
        LiquidityDelta {
            d_x: 0.0,
            d_y: plan.delta_y_a - plan.delta_y_b,
        }
    } else {
        LiquidityDelta::default()
    }
}

pub fn liquidity_delta(
    plan: &TradePlan,
    outcome: FailureOutcome,
    regime: Regime,
) -> LiquidityDelta {
    match regime {
        Regime::Atomic => liquidity_delta_atomic(plan, outcome),
        Regime::NonAtomic => liquidity_delta_non_atomic(plan, outcome),
    }
}

pub fn profit_value(delta: LiquidityDelta, p: ExternalPrice) -> f64 {
    delta.d_y + delta.d_x * p.value()
}

/// `Profit_atomic - Profit_non_atomic` for one realized outcome.
pub fn profit_diff_outcome(plan: &TradePlan, outcome: FailureOutcome, p: ExternalPrice) -> f64 {
    profit_value(liquidity_delta_atomic(plan, outcome), p)
        - profit_value(liquidity_delta_non_atomic(plan, outcome), p)
}

/// Closed-form `E[Profit_atomic - Profit_non_atomic]`:
/// `dx [f_a (P*_B - P_ext) + f_b (P_ext - P*_A) + f_a f_b (P*_A - P*_B)]`.
pub fn expected_profit_diff(plan: &TradePlan, fm: FailureModel, p: ExternalPrice) -> f64 {
    let (f_a, f_b) = (fm.f_a, fm.f_b);
    if f_a == f_b {
        return expected_profit_diff_equal_f(plan, f_a, p);
    }
    // Evaluated as f_a (1 - f_b)(P*_B - P_ext) + f_b (1 - f_a)(P_ext - P*_A).
    let p_ext = p.value();
    plan.delta_x
        * (f_a * (1.0 - f_b) * (plan.price_star_b - p_ext)
            + f_b * (1.0 - f_a) * (p_ext - plan.price_star_a))
}

/// `dx f (1 - f) (P*_B - P*_A)`, negative for any profitable plan and `f` in (0, 1).
pub fn expected_profit_diff_equal_f(plan: &TradePlan, f: f64, _p: ExternalPrice) -> f64 {
    if f == 0.0 || f == 1.0 {
        return 0.0;
    }
    plan.delta_x * f * (1.0 - f) * (plan.price_star_b - plan.price_star_a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeTerm {
    pub outcome: FailureOutcome,
    pub probability: f64,
    pub profit_diff: f64,
}

impl OutcomeTerm {
    pub fn contribution(&self) -> f64 {
        self.probability * self.profit_diff
    }
}

pub fn outcome_terms(plan: &TradePlan, fm: FailureModel, p: ExternalPrice) -> [OutcomeTerm; 4] {
    FailureOutcome::ALL.map(|outcome| OutcomeTerm {
        outcome,
        probability: fm.probability(outcome),
        profit_diff: profit_diff_outcome(plan, outcome, p),
    })
}

/// Brute-force expectation: the four outcome differences weighted by their
/// joint probabilities.
pub fn enumerate_expected_diff(plan: &TradePlan, fm: FailureModel, p: ExternalPrice) -> f64 {
    outcome_terms(plan, fm, p)
        .iter()
        .map(OutcomeTerm::contribution)
        .sum()
}
