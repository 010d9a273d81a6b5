#ifndef ATOMIC_ARB_H
#define ATOMIC_ARB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum AtomicArbStatus {
  ATOMIC_ARB_STATUS_OK = 0,
  ATOMIC_ARB_STATUS_INVALID_INPUT = 1,
  ATOMIC_ARB_STATUS_NO_OPPORTUNITY = 2,
  ATOMIC_ARB_STATUS_NULL_POINTER = 3,
  ATOMIC_ARB_STATUS_BUFFER_TOO_SMALL = 4,
  ATOMIC_ARB_STATUS_INTERNAL = 5,
} AtomicArbStatus;

typedef enum AtomicArbSizingRule {
  ATOMIC_ARB_SIZING_RULE_FEE_ADJUSTED = 0,
  ATOMIC_ARB_SIZING_RULE_POOL_PRICE_EQUALITY = 1,
} AtomicArbSizingRule;

/*
 Opaque sized trade between two pools.
 */
typedef struct AtomicArbPlan AtomicArbPlan;

typedef struct AtomicArbTradeLegs {
  double delta_y_b;
  double delta_x;
  double delta_y_a;
  double price_star_a;
  double price_star_b;
  double end_price_a;
  double end_price_b;
} AtomicArbTradeLegs;

typedef struct AtomicArbMcEstimate {
  double mean;
  double std_error;
  uint64_t samples;
  uint64_t seed;
} AtomicArbMcEstimate;

typedef struct AtomicArbStableInputs {
  double p_y;
  double f_stable;
  /*
   Divide buy legs by `(1 - f_stable)` instead of multiplying.
   */
  bool corrected_buy_side;
  double g_a_success;
  double g_a_fail;
  double g_b_success;
  double g_b_fail;
} AtomicArbStableInputs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *atomic_arb_last_error_message(void);

/*
 Static, NUL-terminated library version.
 */
const char *atomic_arb_version(void);

/*
 Sizes the optimal trade between pool A (higher price) and pool B.

 # Safety
 `out` must be valid for writing one pointer. On success `*out` owns a
 handle that must be released with [`atomic_arb_plan_free`].
 */
enum AtomicArbStatus atomic_arb_plan_new(double x_a,
                                         double y_a,
                                         double x_b,
                                         double y_b,
                                         double fee,
                                         enum AtomicArbSizingRule rule,
                                         struct AtomicArbPlan **out);

/*
 # Safety
 `plan` must be NULL or a handle from [`atomic_arb_plan_new`] not yet freed.
 */
void atomic_arb_plan_free(struct AtomicArbPlan *plan);

/*
 # Safety
 `plan` must be a live handle; `out` valid for writes.
 */
enum AtomicArbStatus atomic_arb_plan_legs(const struct AtomicArbPlan *plan,
                                          struct AtomicArbTradeLegs *out);

/*
 Atomic minus non-atomic profit for one realized outcome.

 # Safety
 `plan` must be a live handle; `out` valid for writes.
 */
enum AtomicArbStatus atomic_arb_profit_diff_outcome(const struct AtomicArbPlan *plan,
                                                    bool a_failed,
                                                    bool b_failed,
                                                    double p_ext,
                                                    double *out);

/*
 Closed-form expected profit difference.

 # Safety
 `plan` must be a live handle; `out` valid for writes.
 */
enum AtomicArbStatus atomic_arb_expected_profit_diff(const struct AtomicArbPlan *plan,
                                                     double f_a,
                                                     double f_b,
                                                     double p_ext,
                                                     double *out);

/*
 Four-outcome enumeration of the expected profit difference.

 # Safety
 `plan` must be a live handle; `out` valid for writes.
 */
enum AtomicArbStatus atomic_arb_enumerate_expected_diff(const struct AtomicArbPlan *plan,
                                                        double f_a,
                                                        double f_b,
                                                        double p_ext,
                                                        double *out);

/*
 Seeded Monte Carlo estimate; deterministic for a given seed.

 # Safety
 `plan` must be a live handle; `out` valid for writes.
 */
enum AtomicArbStatus atomic_arb_simulate(const struct AtomicArbPlan *plan,
                                         double f_a,
                                         double f_b,
                                         double p_ext,
                                         uint64_t samples,
                                         uint64_t seed,
                                         struct AtomicArbMcEstimate *out);

/*
 Fills `out_values[i * points + j]` with the expected difference at
 `f_a = i / (points - 1)`, `f_b = j / (points - 1)`.

 # Safety
 `plan` must be a live handle; `out_values` valid for `out_len` writes.
 */
enum AtomicArbStatus atomic_arb_sweep_grid(const struct AtomicArbPlan *plan,
                                           double p_ext,
                                           uintptr_t points,
                                           double *out_values,
                                           uintptr_t out_len);

/*
 Expected net (profit minus gas) difference in the stable-asset model.

 # Safety
 `plan` must be a live handle; `stable` valid for reads; `out` valid for writes.
 */
enum AtomicArbStatus atomic_arb_stable_expected_net_diff(const struct AtomicArbPlan *plan,
                                                         const struct AtomicArbStableInputs *stable,
                                                         double f_a,
                                                         double f_b,
                                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATOMIC_ARB_H */
