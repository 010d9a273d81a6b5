//! C ABI over `atomic_arb`.
//!
//! Every fallible call returns an [`AtomicArbStatus`] and writes its result
//! through an out-pointer. On failure a description is available from
//! [`atomic_arb_last_error_message`] on the same thread. Plans are opaque
//! handles created by [`atomic_arb_plan_new`] and released with
//! [`atomic_arb_plan_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use atomic_arb::monte_carlo::{simulate_profit_diff, McConfig};
use atomic_arb::stable::{
    bundle_legs, expected_net_diff_stable, FeeMode, GasCostModel, StableParams,
};
use atomic_arb::sweep::{run_sweep, GridAxis, SweepConfig};
use atomic_arb::{
    build_trade_plan, enumerate_expected_diff, expected_profit_diff, profit_diff_outcome,
    ArbOpportunity, ExternalPrice, FailureModel, FailureOutcome, ModelError, PoolState, SizingRule,
    TradePlan,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomicArbStatus {
    Ok = 0,
    InvalidInput = 1,
    NoOpportunity = 2,
    NullPointer = 3,
    BufferTooSmall = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomicArbSizingRule {
    FeeAdjusted = 0,
    PoolPriceEquality = 1,
}

impl From<AtomicArbSizingRule> for SizingRule {
    fn from(r: AtomicArbSizingRule) -> Self {
        match r {
            AtomicArbSizingRule::FeeAdjusted => SizingRule::FeeAdjusted,
            AtomicArbSizingRule::PoolPriceEquality => SizingRule::PoolPriceEquality,
        }
    }
}

/// Opaque sized trade between two pools.
pub struct AtomicArbPlan {
    opp: ArbOpportunity,
    rule: SizingRule,
    plan: TradePlan,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AtomicArbTradeLegs {
    pub delta_y_b: f64,
    pub delta_x: f64,
    pub delta_y_a: f64,
    pub price_star_a: f64,
    pub price_star_b: f64,
    pub end_price_a: f64,
    pub end_price_b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AtomicArbMcEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AtomicArbStableInputs {
    pub p_y: f64,
    pub f_stable: f64,
    /// Divide buy legs by `(1 - f_stable)` instead of multiplying.
    pub corrected_buy_side: bool,
    pub g_a_success: f64,
    pub g_a_fail: f64,
    pub g_b_success: f64,
    pub g_b_fail: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(status: AtomicArbStatus, msg: impl Into<String>) -> AtomicArbStatus {
    set_last_error(msg.into());
    status
}

fn from_model(e: ModelError) -> AtomicArbStatus {
    let status = match e {
        ModelError::NoOpportunity { .. } => AtomicArbStatus::NoOpportunity,
        ModelError::InvalidInput(_) => AtomicArbStatus::InvalidInput,
        ModelError::Io { .. } | ModelError::Csv { .. } => AtomicArbStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), AtomicArbStatus>) -> AtomicArbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AtomicArbStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(AtomicArbStatus::Internal, "panic inside atomic_arb"),
    }
}

unsafe fn plan_ref<'a>(plan: *const AtomicArbPlan) -> Result<&'a AtomicArbPlan, AtomicArbStatus> {
    // SAFETY: caller passes null or a live handle from `atomic_arb_plan_new`.
    unsafe { plan.as_ref() }
        .ok_or_else(|| fail(AtomicArbStatus::NullPointer, "plan handle is null"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), AtomicArbStatus> {
    if out.is_null() {
        return Err(fail(AtomicArbStatus::NullPointer, "output pointer is null"));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn inputs(
    f_a: f64,
    f_b: f64,
    p_ext: f64,
) -> Result<(FailureModel, ExternalPrice), AtomicArbStatus> {
    Ok((
        FailureModel::new(f_a, f_b).map_err(from_model)?,
        ExternalPrice::new(p_ext).map_err(from_model)?,
    ))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn atomic_arb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |c| c.as_ptr())
    })
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn atomic_arb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Sizes the optimal trade between pool A (higher price) and pool B.
///
/// # Safety
/// `out` must be valid for writing one pointer. On success `*out` owns a
/// handle that must be released with [`atomic_arb_plan_free`].
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_plan_new(
    x_a: f64,
    y_a: f64,
    x_b: f64,
    y_b: f64,
    fee: f64,
    rule: AtomicArbSizingRule,
    out: *mut *mut AtomicArbPlan,
) -> AtomicArbStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(AtomicArbStatus::NullPointer, "output pointer is null"));
        }
        let pool_a = PoolState::new(x_a, y_a, fee).map_err(from_model)?;
        let pool_b = PoolState::new(x_b, y_b, fee).map_err(from_model)?;
        let opp = ArbOpportunity::new(pool_a, pool_b).map_err(from_model)?;
        let rule = SizingRule::from(rule);
        let plan = build_trade_plan(&opp, rule).map_err(from_model)?;
        let handle = Box::into_raw(Box::new(AtomicArbPlan { opp, rule, plan }));
        // SAFETY: checked non-null above.
        unsafe { out.write(handle) };
        Ok(())
    })
}

/// # Safety
/// `plan` must be NULL or a handle from [`atomic_arb_plan_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_plan_free(plan: *mut AtomicArbPlan) {
    if !plan.is_null() {
        // SAFETY: ownership returns to Rust exactly once per the contract.
        drop(unsafe { Box::from_raw(plan) });
    }
}

/// # Safety
/// `plan` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_plan_legs(
    plan: *const AtomicArbPlan,
    out: *mut AtomicArbTradeLegs,
) -> AtomicArbStatus {
    guard(|| {
        let p = unsafe { plan_ref(plan) }?.plan;
        let legs = AtomicArbTradeLegs {
            delta_y_b: p.delta_y_b,
            delta_x: p.delta_x,
            delta_y_a: p.delta_y_a,
            price_star_a: p.price_star_a,
            price_star_b: p.price_star_b,
            end_price_a: p.end_price_a,
            end_price_b: p.end_price_b,
        };
        unsafe { write_out(out, legs) }
    })
}

/// Atomic minus non-atomic profit for one realized outcome.
///
/// # Safety
/// `plan` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_profit_diff_outcome(
    plan: *const AtomicArbPlan,
    a_failed: bool,
    b_failed: bool,
    p_ext: f64,
    out: *mut f64,
) -> AtomicArbStatus {
    guard(|| {
        let h = unsafe { plan_ref(plan) }?;
        let p = ExternalPrice::new(p_ext).map_err(from_model)?;
        let v = profit_diff_outcome(&h.plan, FailureOutcome::new(a_failed, b_failed), p);
        unsafe { write_out(out, v) }
    })
}

/// Closed-form expected profit difference.
///
/// # Safety
/// `plan` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_expected_profit_diff(
    plan: *const AtomicArbPlan,
    f_a: f64,
    f_b: f64,
    p_ext: f64,
    out: *mut f64,
) -> AtomicArbStatus {
    guard(|| {
        let h = unsafe { plan_ref(plan) }?;
        let (fm, p) = inputs(f_a, f_b, p_ext)?;
        unsafe { write_out(out, expected_profit_diff(&h.plan, fm, p)) }
    })
}

/// Four-outcome enumeration of the expected profit difference.
///
/// # Safety
/// `plan` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_enumerate_expected_diff(
    plan: *const AtomicArbPlan,
    f_a: f64,
    f_b: f64,
    p_ext: f64,
    out: *mut f64,
) -> AtomicArbStatus {
    guard(|| {
        let h = unsafe { plan_ref(plan) }?;
        let (fm, p) = inputs(f_a, f_b, p_ext)?;
        unsafe { write_out(out, enumerate_expected_diff(&h.plan, fm, p)) }
    })
}

/// Seeded Monte Carlo estimate; deterministic for a given seed.
///
/// # Safety
/// `plan` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_simulate(
    plan: *const AtomicArbPlan,
    f_a: f64,
    f_b: f64,
    p_ext: f64,
    samples: u64,
    seed: u64,
    out: *mut AtomicArbMcEstimate,
) -> AtomicArbStatus {
    guard(|| {
        let h = unsafe { plan_ref(plan) }?;
        let (fm, p) = inputs(f_a, f_b, p_ext)?;
        let cfg = McConfig::new(samples, seed).map_err(from_model)?;
        let est = simulate_profit_diff(&h.plan, fm, p, cfg);
        unsafe {
            write_out(
                out,
                AtomicArbMcEstimate {
                    mean: est.mean,
                    std_error: est.std_error,
                    samples: est.samples,
                    seed: est.seed,
                },
            )
        }
    })
}

/// Fills `out_values[i * points + j]` with the expected difference at
/// `f_a = i / (points - 1)`, `f_b = j / (points - 1)`.
///
/// # Safety
/// `plan` must be a live handle; `out_values` valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_sweep_grid(
    plan: *const AtomicArbPlan,
    p_ext: f64,
    points: usize,
    out_values: *mut f64,
    out_len: usize,
) -> AtomicArbStatus {
    guard(|| {
        let h = unsafe { plan_ref(plan) }?;
        if out_values.is_null() {
            return Err(fail(AtomicArbStatus::NullPointer, "output buffer is null"));
        }
        let axis = GridAxis::unit(points).map_err(from_model)?;
        let needed = points * points;
        if out_len < needed {
            return Err(fail(
                AtomicArbStatus::BufferTooSmall,
                format!("buffer holds {out_len} values, grid needs {needed}"),
            ));
        }
        let cfg = SweepConfig::new(h.opp, h.rule, vec![p_ext]).with_grid(axis, axis);
        let cells = run_sweep(&cfg).map_err(from_model)?;
        // SAFETY: non-null and valid for `out_len >= needed` writes.
        let dst = unsafe { std::slice::from_raw_parts_mut(out_values, needed) };
        for (slot, cell) in dst.iter_mut().zip(&cells) {
            *slot = cell.expected_diff;
        }
        Ok(())
    })
}

/// Expected net (profit minus gas) difference in the stable-asset model.
///
/// # Safety
/// `plan` must be a live handle; `stable` valid for reads; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn atomic_arb_stable_expected_net_diff(
    plan: *const AtomicArbPlan,
    stable: *const AtomicArbStableInputs,
    f_a: f64,
    f_b: f64,
    out: *mut f64,
) -> AtomicArbStatus {
    guard(|| {
        let h = unsafe { plan_ref(plan) }?;
        // SAFETY: null or valid for reads per the contract.
        let s = unsafe { stable.as_ref() }
            .ok_or_else(|| fail(AtomicArbStatus::NullPointer, "stable inputs are null"))?;
        let mode = if s.corrected_buy_side {
            FeeMode::CorrectedBuySide
        } else {
            FeeMode::AsPrinted
        };
        let sp = StableParams::new(s.p_y, s.f_stable, mode).map_err(from_model)?;
        let gas = GasCostModel::new(s.g_a_success, s.g_a_fail, s.g_b_success, s.g_b_fail)
            .map_err(from_model)?;
        let fm = FailureModel::new(f_a, f_b).map_err(from_model)?;
        let legs = bundle_legs(&h.plan, &h.opp, &sp);
        unsafe { write_out(out, expected_net_diff_stable(&legs, &gas, fm)) }
    })
}
