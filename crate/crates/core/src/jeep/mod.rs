//! The jeep problem: crossing `x` miles of desert with a tank of `m` gallons
//! burning `g` gallons per mile, caching fuel at intermediate points.
//!
//! [`eval_subdivision_exact`] evaluates the minimum gas for a fixed set of
//! cache points by folding [`segment_step_exact`] from the far end. The
//! [`fast`] submodule handles equal subdivisions with index skipping, and
//! [`graph`] extends the problem to undirected graphs.

pub mod fast;
pub mod graph;

use serde::Serialize;
use thiserror::Error;

use crate::num::{div_floor, le_tol};

pub use fast::{
    compare_methods, equal_fast_trace, eval_equal_fast, first_index, method2_naive, threshold_search, EvalMethod,
    FastEval, FirstIndexMethod, MethodComparison, Schedule, ThresholdResult, DEFAULT_MAX_K,
};
pub use graph::{forward_candidate, BinaryForward, JeepGraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JeepError {
    #[error("tank capacity and consumption must be positive and finite (m = {capacity}, g = {consumption})")]
    InvalidParams { capacity: f64, consumption: f64 },
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("segment of length {length} cannot move fuel forward: a round trip burns at least a full tank")]
    Infeasible { length: f64 },
    #[error("budget {budget} not reached by k = {max_k}; best value {best_value} at k = {best_k}")]
    BudgetUnreachable { budget: f64, max_k: u64, best_k: u64, best_value: f64 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("Method 2 estimate exceeds {limit} units of a = {unit}")]
    Overflow { unit: f64, limit: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JeepParams {
    /// Tank capacity `m` in gallons.
    pub capacity: f64,
    /// Consumption `g` in gallons per mile.
    pub consumption: f64,
}

impl JeepParams {
    pub fn new(capacity: f64, consumption: f64) -> Result<Self, JeepError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(capacity) || !ok(consumption) {
            return Err(JeepError::InvalidParams { capacity, consumption });
        }
        Ok(Self { capacity, consumption })
    }

    /// Distance a single full tank covers.
    pub fn range(&self) -> f64 {
        self.capacity / self.consumption
    }
}

/// Cache points `0 = d₀ < d₁ < … < d_{k+1} = x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subdivision {
    points: Vec<f64>,
}

impl Subdivision {
    pub fn new(points: Vec<f64>) -> Result<Self, JeepError> {
        if points.len() < 2 {
            return Err(JeepError::InvalidSubdivision("need at least the two endpoints".into()));
        }
        if points[0] != 0.0 {
            return Err(JeepError::InvalidSubdivision(format!("first point must be 0, got {}", points[0])));
        }
        if let Some(w) = points.windows(2).find(|w| w[1].is_nan() || w[1] <= w[0] || !w[1].is_finite()) {
            return Err(JeepError::InvalidSubdivision(format!(
                "points must be finite and strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self { points })
    }

    /// `k + 2` evenly spaced points on `[0, x]`; the last point is exactly `x`.
    pub fn equal(x: f64, k: u64) -> Result<Self, JeepError> {
        if x.is_nan() || x <= 0.0 || !x.is_finite() {
            return Err(JeepError::InvalidSubdivision(format!("distance must be positive, got {x}")));
        }
        let segments = k + 1;
        let c = x / segments as f64;
        let mut points: Vec<f64> = (0..segments).map(|i| i as f64 * c).collect();
        points.push(x);
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of intermediate cache points `k`.
    pub fn cache_points(&self) -> usize {
        self.points.len() - 2
    }

    pub fn distance(&self) -> f64 {
        *self.points.last().expect("at least two points")
    }

    pub fn segment_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.windows(2).map(|w| w[1] - w[0])
    }
}

/// How a segment moves `f(i+1)` gallons forward: `round_trips` full
/// out-and-back runs plus one final one-way trip depositing `final_delivery`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentPlan {
    pub round_trips: u64,
    pub final_delivery: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransferMode {
    /// Final-trip deposit bounded by `m − 2gc` (after the remainder adjustment).
    #[default]
    Faithful,
    /// Final trip may deposit up to `m − gc`; never worse than `Faithful`.
    Corrected,
}

/// One backward step: gallons needed at the start of a segment of length
/// `c` so that `f_next` gallons end up at its far end.
pub fn segment_step_exact(
    f_next: f64,
    c: f64,
    params: &JeepParams,
    mode: TransferMode,
) -> Result<(f64, SegmentPlan), JeepError> {
    let m = params.capacity;
    let burn = params.consumption * c;
    if le_tol(f_next + burn, m) {
        return Ok((f_next + burn, SegmentPlan { round_trips: 0, final_delivery: f_next }));
    }
    let net = m - 2.0 * burn;
    if net <= 0.0 {
        return Err(JeepError::Infeasible { length: c });
    }
    let (l, r) = div_floor(f_next, net);
    let (mut rt, mut q) = if r <= burn && l > 0 { (l - 1, r + net) } else { (l, r) };
    if mode == TransferMode::Corrected {
        // fewest round trips leaving a final deposit no larger than m − gc
        let excess = f_next - (m - burn);
        let (whole, rest) = div_floor(excess, net);
        let fewest = if rest > 0.0 { whole + 1 } else { whole };
        if fewest < rt {
            rt = fewest;
            q = (f_next - rt as f64 * net).max(0.0);
        }
    }
    let f = rt as f64 * m + q + burn;
    Ok((f, SegmentPlan { round_trips: rt, final_delivery: q }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubdivisionEval {
    /// `f(0, d)`: gallons drawn at the start.
    pub fuel: f64,
    /// `f(i, d)` for every point, ending with the terminal requirement.
    pub requirements: Vec<f64>,
    /// One plan per segment, in forward order.
    pub plans: Vec<SegmentPlan>,
}

/// Method 1: fold the exact step from the last point back to the first,
/// starting with `terminal` gallons required at `x`.
pub fn eval_subdivision_exact(
    d: &Subdivision,
    params: &JeepParams,
    terminal: f64,
    mode: TransferMode,
) -> Result<SubdivisionEval, JeepError> {
    let segments = d.points.len() - 1;
    let mut requirements = vec![0.0; segments + 1];
    let mut plans = vec![SegmentPlan { round_trips: 0, final_delivery: 0.0 }; segments];
    requirements[segments] = terminal;
    for i in (0..segments).rev() {
        let c = d.points[i + 1] - d.points[i];
        let (f, plan) = segment_step_exact(requirements[i + 1], c, params, mode)?;
        requirements[i] = f;
        plans[i] = plan;
    }
    Ok(SubdivisionEval { fuel: requirements[0], requirements, plans })
}

/// Method 1 value only, without materializing plans.
pub fn subdivision_fuel(
    d: &Subdivision,
    params: &JeepParams,
    terminal: f64,
    mode: TransferMode,
) -> Result<f64, JeepError> {
    d.points
        .windows(2)
        .rev()
        .try_fold(terminal, |f_next, w| segment_step_exact(f_next, w[1] - w[0], params, mode).map(|(f, _)| f))
}

/// Minimum gas when caches may be placed anywhere.
///
/// With `F ∈ [t·m, (t+1)·m]` gallons the jeep reaches
/// `(m/g)·(Σ_{i=1..t} 1/(2i−1) + (F/m − t)/(2t+1))` miles; this inverts that
/// distance function.
pub fn continuous_optimum(x: f64, params: &JeepParams) -> f64 {
    let m = params.capacity;
    let range = params.range();
    if x <= range {
        return params.consumption * x;
    }
    let target = x / range;
    let mut reach = 0.0;
    let mut t: u64 = 0;
    loop {
        let next = reach + 1.0 / (2 * t + 1) as f64;
        if next >= target {
            return m * (t as f64 + (target - reach) * (2 * t + 1) as f64);
        }
        reach = next;
        t += 1;
    }
}
