//! Method 2 for equal subdivisions.
//!
//! Dropping the remainder adjustment of the exact step gives the recurrence
//! `g(i) = g(i+1) + (2·l + 1)·a` with `a = g·c` and
//! `l = g(i+1) div (m − 2a)`. This upper-bounds `f(0, d)`, and consecutive
//! indices sharing the same quotient `l` can be skipped in one jump.
//!
//! Every `g(i)` is an odd-integer combination of `a`, so both the naive loop
//! and the skipping evaluator track the value as an integer count of `a`
//! units. That makes the two routes agree bit for bit.

use std::time::{Duration, Instant};

use serde::Serialize;

use super::{subdivision_fuel, JeepError, JeepParams, Subdivision, TransferMode};
use crate::num::{div_floor, le_tol, REL_TOL};

/// Unit counts stay below this so that `units as f64` is exact.
const MAX_UNITS: u64 = 1 << 53;

struct EqualSteps {
    a: f64,
    net: f64,
}

impl EqualSteps {
    fn new(x: f64, k: u64, params: &JeepParams) -> Result<Self, JeepError> {
        let c = x / (k + 1) as f64;
        let a = params.consumption * c;
        let net = params.capacity - 2.0 * a;
        if net <= 0.0 {
            return Err(JeepError::Infeasible { length: c });
        }
        Ok(Self { a, net })
    }

    #[inline]
    fn quotient(&self, units: u64) -> u64 {
        div_floor(units as f64 * self.a, self.net).0
    }

    /// `units + count·step`, refusing to leave the exact range.
    fn advance(&self, units: u64, count: u64, step: u64) -> Result<u64, JeepError> {
        count
            .checked_mul(step)
            .and_then(|d| units.checked_add(d))
            .filter(|&u| u <= MAX_UNITS)
            .ok_or(JeepError::Overflow { unit: self.a, limit: MAX_UNITS })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FastEval {
    /// `g(0, d)`.
    pub fuel: f64,
    /// Number of subdivision indices whose value was computed, including
    /// `k + 1` and `0`.
    pub points_touched: u64,
    /// `g(0, d) div (m − 2a)`.
    pub l0: u64,
}

/// The plain Method 2 recurrence, one index at a time.
pub fn method2_naive(x: f64, k: u64, params: &JeepParams) -> Result<f64, JeepError> {
    let steps = EqualSteps::new(x, k, params)?;
    let mut units = 0u64;
    for _ in 0..=k {
        units = steps.advance(units, 1, 2 * steps.quotient(units) + 1)?;
    }
    Ok(units as f64 * steps.a)
}

/// Method 2 with index skipping.
pub fn eval_equal_fast(x: f64, k: u64, params: &JeepParams) -> Result<FastEval, JeepError> {
    skip_walk(x, k, params, |_| {})
}

/// Indices visited by [`eval_equal_fast`], from `k + 1` down to `0`.
pub fn equal_fast_trace(x: f64, k: u64, params: &JeepParams) -> Result<Vec<u64>, JeepError> {
    let mut seen = Vec::new();
    skip_walk(x, k, params, |idx| seen.push(idx))?;
    Ok(seen)
}

fn skip_walk(x: f64, k: u64, params: &JeepParams, mut visit: impl FnMut(u64)) -> Result<FastEval, JeepError> {
    let steps = EqualSteps::new(x, k, params)?;
    let mut idx = k + 1;
    let mut units = 0u64;
    let mut l = 0;
    let mut touched = 1;
    visit(idx);
    while idx > 0 {
        let step = 2 * l + 1;
        let mut u = idx;
        // A step wider than m − 2a always changes the quotient, so the run
        // is just `idx`; the margin keeps rounding from deciding that.
        if step as f64 * steps.a <= steps.net * (1.0 + 1e-6) {
            u = first_index(idx, units as f64 * steps.a, steps.a, params.capacity, FirstIndexMethod::Direct);
            // Snap the closed-form run start to the shared quotient so that
            // float noise at an exact-multiple boundary cannot desynchronize
            // it from the one-step recurrence.
            while u < idx && steps.quotient(units + (idx - u) * step) != l {
                u += 1;
            }
            while u > 1 && steps.quotient(units + (idx - u + 1) * step) == l {
                u -= 1;
            }
        }
        units = steps.advance(units, idx - u + 1, step)?;
        l = steps.quotient(units);
        idx = u - 1;
        touched += 1;
        visit(idx);
    }
    Ok(FastEval { fuel: units as f64 * steps.a, points_touched: touched, l0: l })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FirstIndexMethod {
    Direct,
    BinarySearch,
}

/// Smallest `u ≥ 1` such that every index in `u..=v` shares the quotient of
/// `g_v`, when values grow by `(2·l_v + 1)·a` per index going down.
///
/// Requires `m − 2a > 0`.
pub fn first_index(v: u64, g_v: f64, a: f64, m: f64, method: FirstIndexMethod) -> u64 {
    if v <= 1 {
        return 1;
    }
    let net = m - 2.0 * a;
    debug_assert!(net > 0.0);
    let (l, r) = div_floor(g_v, net);
    let step = (2 * l + 1) as f64 * a;
    match method {
        FirstIndexMethod::Direct => {
            let (mut dif, rem) = div_floor(net - r, step);
            if rem <= REL_TOL * step {
                dif = dif.saturating_sub(1);
            }
            v.saturating_sub(dif).max(1)
        }
        FirstIndexMethod::BinarySearch => {
            let same = |t: u64| div_floor(g_v + t as f64 * step, net).0 == l;
            let (mut lo, mut hi) = (0u64, v - 1);
            while lo < hi {
                let mid = lo + (hi - lo).div_ceil(2);
                if same(mid) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            v - lo
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "ct")]
pub enum Schedule {
    /// `k ← ct·k` (and at least `k + 1`).
    Multiplicative(u64),
    /// `k ← k + ct`.
    Additive(u64),
}

impl Schedule {
    fn next(self, k: u64) -> u64 {
        match self {
            Schedule::Multiplicative(ct) => k.saturating_mul(ct).max(k + 1),
            Schedule::Additive(ct) => k.saturating_add(ct.max(1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    /// Method 1 on the equal subdivision.
    Exact,
    /// Method 2; a satisfying `g(0, d)` implies a satisfying `f(0, d)`.
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub k: u64,
    pub value: f64,
    pub evaluations: u64,
}

pub const DEFAULT_MAX_K: u64 = 1 << 20;

/// Refines equal subdivisions until the gas estimate fits `budget`.
pub fn threshold_search(
    x: f64,
    params: &JeepParams,
    budget: f64,
    schedule: Schedule,
    k1: u64,
    method: EvalMethod,
    max_k: u64,
) -> Result<ThresholdResult, JeepError> {
    let mut k = k1;
    let mut evaluations = 0;
    let mut best: Option<(u64, f64)> = None;
    while k <= max_k {
        evaluations += 1;
        let value = match method {
            EvalMethod::Exact => {
                Subdivision::equal(x, k).and_then(|d| subdivision_fuel(&d, params, 0.0, TransferMode::Faithful))
            }
            EvalMethod::Fast => eval_equal_fast(x, k, params).map(|e| e.fuel),
        };
        match value {
            Ok(value) => {
                if le_tol(value, budget) {
                    return Ok(ThresholdResult { k, value, evaluations });
                }
                if best.is_none_or(|(_, b)| value < b) {
                    best = Some((k, value));
                }
            }
            Err(JeepError::Infeasible { .. } | JeepError::Overflow { .. }) => {}
            Err(e) => return Err(e),
        }
        k = schedule.next(k);
    }
    let (best_k, best_value) = best.unwrap_or((k1, f64::INFINITY));
    Err(JeepError::BudgetUnreachable { budget, max_k, best_k, best_value })
}

/// One row of the Method 1 / Method 2 comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodComparison {
    pub k: u64,
    pub exact: f64,
    pub fast: f64,
    /// `g(0, d) / f(0, d)`.
    pub value_ratio: f64,
    pub points_touched: u64,
    pub exact_secs: f64,
    pub fast_secs: f64,
    /// `R₂(k) / R₁(k)`.
    pub time_ratio: f64,
}

fn best_time<T>(budget: Duration, mut run: impl FnMut() -> T) -> (T, f64) {
    let started = Instant::now();
    let first = Instant::now();
    let mut out = run();
    let mut best = first.elapsed();
    let mut reps = 1;
    while reps < 3 || (started.elapsed() < budget && reps < 10_000) {
        let t = Instant::now();
        out = run();
        best = best.min(t.elapsed());
        reps += 1;
    }
    (out, best.as_secs_f64())
}

/// Times Method 1 and Method 2 on the equal subdivision with `k` cache
/// points, keeping the fastest of repeated runs within `budget` each.
pub fn compare_methods(x: f64, k: u64, params: &JeepParams, budget: Duration) -> Result<MethodComparison, JeepError> {
    let d = Subdivision::equal(x, k)?;
    let (exact, exact_secs) = best_time(budget, || subdivision_fuel(&d, params, 0.0, TransferMode::Faithful));
    let exact = exact?;
    let (fast, fast_secs) = best_time(budget, || eval_equal_fast(x, k, params));
    let fast = fast?;
    Ok(MethodComparison {
        k,
        exact,
        fast: fast.fuel,
        value_ratio: fast.fuel / exact,
        points_touched: fast.points_touched,
        exact_secs,
        fast_secs,
        time_ratio: fast_secs / exact_secs,
    })
}
