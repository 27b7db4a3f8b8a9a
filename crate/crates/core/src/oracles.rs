//! Brute-force references for small instances.
//!
//! None of these call into the solver they check. They share only the
//! instance types, the tolerance helpers and the geometry predicates.
//! Inputs above each oracle's size limit are rejected, never truncated.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use itertools::Itertools;
use ordered_float::OrderedFloat;
use thiserror::Error;

use crate::fuel::FuelInstance;
use crate::geometry::segment_inside;
use crate::hampath::{CurveInstance, DistanceMatrix, HamPath, SimplePolygon};
use crate::jeep::{JeepGraph, JeepParams, SegmentPlan, Subdivision};
use crate::num::le_tol;
use crate::ovrp::OvrpInstance;

pub const OVRP_MAX_VERTICES: usize = 12;
pub const OVRP_MAX_VEHICLES: usize = 4;
pub const FUEL_MAX_ORDERS: u64 = 1_000_000;
pub const HAM_MAX_VERTICES: usize = 9;
pub const ZIGZAG_MAX_VERTICES: usize = 20;
pub const GRAPH_MAX_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} is {size}, oracle limit is {limit}")]
    SizeLimit { what: &'static str, size: u64, limit: u64 },
    #[error("segment {segment}: {reason}")]
    PlanInfeasible { segment: usize, reason: String },
    #[error("start vertex {start} out of range for {n} vertices")]
    BadStart { start: usize, n: usize },
}

fn limit(what: &'static str, size: u64, limit: u64) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::SizeLimit { what, size, limit })
    } else {
        Ok(())
    }
}

/// Uniform-cost search over `(visited set, position, vehicles started)`.
/// A vehicle walks tree edges; starting the next vehicle teleports to the
/// root at no cost.
pub fn ovrp_brute(inst: &OvrpInstance) -> Result<f64, OracleError> {
    let tree = inst.tree();
    let n = tree.len();
    let p = inst.vehicles();
    limit("vertex count", n as u64, OVRP_MAX_VERTICES as u64)?;
    limit("vehicle count", p as u64, OVRP_MAX_VEHICLES as u64)?;

    let mut adj = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(u) = tree.parent(v) {
            adj[u].push((v, tree.edge_len(v)));
            adj[v].push((u, tree.edge_len(v)));
        }
    }
    let root = tree.root();
    let full = (1u32 << n) - 1;
    let mut best: HashMap<(u32, usize, usize), f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let start = (1u32 << root, root, 1usize);
    best.insert(start, 0.0);
    heap.push(Reverse((OrderedFloat(0.0), start)));
    while let Some(Reverse((OrderedFloat(cost), state))) = heap.pop() {
        if best.get(&state).is_some_and(|&b| b < cost) {
            continue;
        }
        let (mask, at, used) = state;
        if mask == full {
            return Ok(cost);
        }
        let mut push = |next: (u32, usize, usize), c: f64| {
            if best.get(&next).is_none_or(|&b| c < b) {
                best.insert(next, c);
                heap.push(Reverse((OrderedFloat(c), next)));
            }
        };
        for &(v, len) in &adj[at] {
            push((mask | 1 << v, v, used), cost + len);
        }
        if used < p && at != root {
            push((mask, root, used + 1), cost);
        }
    }
    unreachable!("a connected tree can always be covered")
}

/// Tries every depth-first order (every permutation of every child list)
/// and returns the least initial fuel that keeps the tank non-negative.
pub fn fuel_brute(inst: &FuelInstance) -> Result<f64, OracleError> {
    let tree = inst.tree();
    let n = tree.len();
    let orders = (0..n).try_fold(1u64, |acc, u| {
        let k = tree.children(u).len() as u64;
        (1..=k).try_fold(acc, |a, f| a.checked_mul(f))
    });
    limit("DFS order count", orders.unwrap_or(u64::MAX), FUEL_MAX_ORDERS)?;

    let perms: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|u| {
            let ch = tree.children(u);
            ch.iter().copied().permutations(ch.len()).collect()
        })
        .collect();
    let gas = inst.gas();
    let mut best = f64::INFINITY;
    for choice in perms.iter().map(|p| 0..p.len()).multi_cartesian_product() {
        // walk the Euler tour for this choice of child orders
        let mut fuel = gas[tree.root()];
        let mut deficit: f64 = 0.0;
        let mut stack = vec![(tree.root(), 0usize)];
        while let Some((u, next)) = stack.pop() {
            let order = &perms[u][choice[u]];
            if next < order.len() {
                let v = order[next];
                stack.push((u, next + 1));
                fuel -= tree.edge_len(v);
                deficit = deficit.max(-fuel);
                fuel += gas[v];
                stack.push((v, 0));
            } else if tree.parent(u).is_some() {
                fuel -= tree.edge_len(u);
                deficit = deficit.max(-fuel);
            }
        }
        best = best.min(deficit);
    }
    // a tree with no edges has exactly one empty order
    Ok(if best.is_finite() { best } else { 0.0 })
}

/// Replays a jeep schedule trip by trip and returns the gas drawn at the
/// start. Every load must fit the tank, every stock must cover the next
/// draw, and the last point must receive `terminal`.
pub fn jeep_simulate_plan(
    d: &Subdivision,
    params: &JeepParams,
    plans: &[SegmentPlan],
    terminal: f64,
) -> Result<f64, OracleError> {
    let pts = d.points();
    if plans.len() + 1 != pts.len() {
        return Err(OracleError::PlanInfeasible {
            segment: plans.len().min(pts.len()),
            reason: format!("{} plans for {} segments", plans.len(), pts.len() - 1),
        });
    }
    let m = params.capacity;
    let fail = |segment, reason: String| Err(OracleError::PlanInfeasible { segment, reason });
    let mut drawn = 0.0;
    let mut stock: Option<f64> = None;
    for (i, plan) in plans.iter().enumerate() {
        let burn = params.consumption * (pts[i + 1] - pts[i]);
        let draw = plan.round_trips as f64 * m + plan.final_delivery + burn;
        match stock {
            None => drawn = draw,
            Some(s) if !le_tol(draw, s) => return fail(i, format!("needs {draw} gallons, only {s} cached")),
            Some(_) => {}
        }
        if plan.round_trips > 0 && 2.0 * burn > m {
            return fail(i, format!("round trip burns {} of a {m} tank", 2.0 * burn));
        }
        if plan.final_delivery < 0.0 {
            return fail(i, format!("negative delivery {}", plan.final_delivery));
        }
        if !le_tol(plan.final_delivery + burn, m) {
            return fail(i, format!("final trip loads {} of a {m} tank", plan.final_delivery + burn));
        }
        stock = Some(plan.round_trips as f64 * (m - 2.0 * burn) + plan.final_delivery);
    }
    let arrived = stock.unwrap_or(0.0);
    if !le_tol(terminal, arrived) {
        return fail(plans.len() - 1, format!("delivers {arrived}, {terminal} required at the end"));
    }
    Ok(drawn)
}

/// Best simple source-target path in a jeep graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphPathBrute {
    /// Minimum gas at the source over all simple paths.
    pub gas: f64,
    /// A path attaining `gas`, empty when none is feasible.
    pub path: Vec<usize>,
    /// Length of the shortest simple path.
    pub shortest: f64,
}

/// Enumerates simple paths from vertex 0 to the last vertex. Depots sit at
/// path vertices and at `k_per_edge` equally spaced points inside each edge.
///
/// Moving `r` gallons across a stretch burning `b` takes `t` loads, the
/// fewest with `(t − 1)(m − 2b) + (m − b) ≥ r`, and costs `r + (2t − 1)·b`.
pub fn jeep_graph_paths_brute(
    graph: &JeepGraph,
    params: &JeepParams,
    k_per_edge: u64,
) -> Result<GraphPathBrute, OracleError> {
    let n = graph.len();
    limit("vertex count", n as u64, GRAPH_MAX_VERTICES as u64)?;
    let mut adj = vec![Vec::new(); n];
    for &(u, v, len) in graph.edges() {
        adj[u].push((v, len));
        adj[v].push((u, len));
    }
    let m = params.capacity;
    let carry = |r: f64, b: f64| -> f64 {
        if le_tol(r + b, m) {
            return r + b;
        }
        let net = m - 2.0 * b;
        if net <= 0.0 {
            return f64::INFINITY;
        }
        let mut t = ((r - (m - b)) / net).ceil().max(0.0) + 1.0;
        // the ceiling can land one load short or long in floating point
        while t > 1.0 && le_tol(r, (t - 2.0) * net + m - b) {
            t -= 1.0;
        }
        while !le_tol(r, (t - 1.0) * net + m - b) {
            t += 1.0;
        }
        r + (2.0 * t - 1.0) * b
    };
    let gas_along = |lens: &[f64]| -> f64 {
        let mut r = 0.0;
        for &len in lens.iter().rev() {
            let b = params.consumption * len / (k_per_edge + 1) as f64;
            for _ in 0..=k_per_edge {
                r = carry(r, b);
            }
        }
        r
    };
    let mut best = GraphPathBrute { gas: f64::INFINITY, path: Vec::new(), shortest: f64::INFINITY };
    let mut path = vec![0];
    let mut lens = Vec::new();
    let mut on_path = vec![false; n];
    on_path[0] = true;
    fn walk(
        adj: &[Vec<(usize, f64)>],
        path: &mut Vec<usize>,
        lens: &mut Vec<f64>,
        on_path: &mut [bool],
        visit: &mut dyn FnMut(&[usize], &[f64]),
    ) {
        let at = *path.last().unwrap();
        if at == adj.len() - 1 {
            visit(path, lens);
            return;
        }
        for &(v, len) in &adj[at] {
            if on_path[v] {
                continue;
            }
            on_path[v] = true;
            path.push(v);
            lens.push(len);
            walk(adj, path, lens, on_path, visit);
            lens.pop();
            path.pop();
            on_path[v] = false;
        }
    }
    walk(&adj, &mut path, &mut lens, &mut on_path, &mut |p, l| {
        best.shortest = best.shortest.min(l.iter().sum());
        let gas = gas_along(l);
        if gas < best.gas {
            best.gas = gas;
            best.path = p.to_vec();
        }
    });
    Ok(best)
}

/// Euclidean distances between vertex pairs whose segment stays inside the
/// polygon, tested pair by pair without shortcuts.
pub fn polygon_distances_brute(poly: &SimplePolygon) -> DistanceMatrix {
    let v = poly.vertices();
    DistanceMatrix::from_fn(v.len(), |i, j| if segment_inside(v, v[i], v[j]) { v[i].dist(v[j]) } else { f64::INFINITY })
}

/// Minimum over all vertex orders with finite consecutive distances.
pub fn ham_brute(dist: &DistanceMatrix, start: Option<usize>) -> Result<HamPath, OracleError> {
    let n = dist.len();
    limit("vertex count", n as u64, HAM_MAX_VERTICES as u64)?;
    if let Some(s) = start.filter(|&s| s >= n) {
        return Err(OracleError::BadStart { start: s, n });
    }
    let starts: Vec<usize> = match start {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    let mut best = HamPath { length: f64::INFINITY, path: Vec::new() };
    for s in starts {
        let rest: Vec<usize> = (0..n).filter(|&v| v != s).collect();
        for tail in rest.iter().copied().permutations(rest.len()) {
            let mut length = 0.0;
            let mut at = s;
            for &v in &tail {
                length += dist.get(at, v);
                at = v;
            }
            if length < best.length {
                let mut path = vec![s];
                path.extend(tail);
                best = HamPath { length, path };
            }
        }
    }
    Ok(best)
}

/// What a curve tour is scored on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveObjective {
    /// `Σ wᵢ·dt(i)`.
    Weighted,
    /// Distance traveled until the last vertex is reached.
    Length,
}

/// Every left/right extension order of the visited arc, with each move
/// taking the shorter way around the curve.
pub fn curve_zigzag_brute(inst: &CurveInstance, objective: CurveObjective) -> Result<HamPath, OracleError> {
    let n = inst.len();
    limit("vertex count", n as u64, ZIGZAG_MAX_VERTICES as u64)?;
    let gaps = inst.gaps();
    let forward = |a: usize, b: usize| -> f64 {
        let mut s = 0.0;
        let mut k = a;
        while k != b {
            s += gaps[k];
            k = (k + 1) % n;
        }
        s
    };
    let dist = |a: usize, b: usize| forward(a, b).min(forward(b, a));

    struct Search<'a> {
        n: usize,
        w: &'a [f64],
        objective: CurveObjective,
        dist: &'a dyn Fn(usize, usize) -> f64,
        best: HamPath,
        path: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, lo: usize, hi: usize, at: usize, time: f64, cost: f64) {
            if self.path.len() == self.n {
                let score = match self.objective {
                    CurveObjective::Weighted => cost,
                    CurveObjective::Length => time,
                };
                if score < self.best.length {
                    self.best = HamPath { length: score, path: self.path.clone() };
                }
                return;
            }
            let left = (lo + self.n - 1) % self.n;
            let right = (hi + 1) % self.n;
            for (next, lo2, hi2) in [(left, left, hi), (right, lo, right)] {
                let t = time + (self.dist)(at, next);
                self.path.push(next);
                self.go(lo2, hi2, next, t, cost + self.w[next] * t);
                self.path.pop();
                if left == right {
                    break;
                }
            }
        }
    }

    let starts: Vec<usize> = match inst.start() {
        Some(s) => vec![s],
        None => (0..n).collect(),
    };
    let mut search = Search {
        n,
        w: inst.weights(),
        objective,
        dist: &dist,
        best: HamPath { length: f64::INFINITY, path: Vec::new() },
        path: Vec::new(),
    };
    for s in starts {
        search.path = vec![s];
        search.go(s, s, s, 0.0, 0.0);
    }
    Ok(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuel::ValueMode;
    use crate::geometry::Point;
    use crate::jeep::{eval_subdivision_exact, TransferMode};
    use crate::tree::RootedTree;

    fn star() -> RootedTree {
        RootedTree::new(3, &[(0, 1, 2.0), (0, 2, 3.0)], 0).unwrap()
    }

    #[test]
    fn ovrp_examples() {
        assert_eq!(ovrp_brute(&OvrpInstance::new(star(), 1).unwrap()).unwrap(), 7.0);
        assert_eq!(ovrp_brute(&OvrpInstance::new(star(), 2).unwrap()).unwrap(), 5.0);
        assert_eq!(ovrp_brute(&OvrpInstance::new(star(), 3).unwrap()).unwrap(), 5.0);
        let single = RootedTree::new(1, &[], 0).unwrap();
        assert_eq!(ovrp_brute(&OvrpInstance::new(single, 2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn ovrp_limits() {
        let edges: Vec<_> = (1..13).map(|v| (v - 1, v, 1.0)).collect();
        let chain = RootedTree::new(13, &edges, 0).unwrap();
        assert!(matches!(ovrp_brute(&OvrpInstance::new(chain, 1).unwrap()), Err(OracleError::SizeLimit { .. })));
        assert!(matches!(ovrp_brute(&OvrpInstance::new(star(), 5).unwrap()), Err(OracleError::SizeLimit { .. })));
    }

    #[test]
    fn fuel_examples() {
        let chain = RootedTree::new(2, &[(0, 1, 2.0)], 0).unwrap();
        let inst = FuelInstance::new(chain, vec![0.0, 0.0], ValueMode::Integer).unwrap();
        assert_eq!(fuel_brute(&inst).unwrap(), 4.0);

        let ab = RootedTree::new(3, &[(0, 1, 1.0), (0, 2, 5.0)], 0).unwrap();
        let inst = FuelInstance::new(ab, vec![0.0, 10.0, 0.0], ValueMode::Integer).unwrap();
        assert_eq!(fuel_brute(&inst).unwrap(), 2.0);

        let single = RootedTree::new(1, &[], 0).unwrap();
        let inst = FuelInstance::new(single, vec![3.0], ValueMode::Integer).unwrap();
        assert_eq!(fuel_brute(&inst).unwrap(), 0.0);
    }

    #[test]
    fn fuel_limit() {
        let edges: Vec<_> = (1..11).map(|v| (0, v, 1.0)).collect();
        let wide = RootedTree::new(11, &edges, 0).unwrap();
        let inst = FuelInstance::new(wide, vec![0.0; 11], ValueMode::Integer).unwrap();
        assert!(matches!(fuel_brute(&inst), Err(OracleError::SizeLimit { .. })));
    }

    #[test]
    fn jeep_replay() {
        let params = JeepParams::new(1.0, 1.0).unwrap();
        let d = Subdivision::equal(1.0, 4).unwrap();
        let eval = eval_subdivision_exact(&d, &params, 0.0, TransferMode::Faithful).unwrap();
        assert_eq!(jeep_simulate_plan(&d, &params, &eval.plans, 0.0).unwrap(), eval.fuel);

        let short = Subdivision::new(vec![0.0, 0.7]).unwrap();
        let eval = eval_subdivision_exact(&short, &params, 0.0, TransferMode::Faithful).unwrap();
        assert_eq!(jeep_simulate_plan(&short, &params, &eval.plans, 0.0).unwrap(), 0.7);

        let d = Subdivision::new(vec![0.0, 1.0 / 3.0, 4.0 / 3.0]).unwrap();
        let mut plans = eval_subdivision_exact(&d, &params, 0.0, TransferMode::Faithful).unwrap().plans;
        assert_eq!(plans[0].round_trips, 2);
        plans[0].round_trips -= 1;
        assert!(matches!(jeep_simulate_plan(&d, &params, &plans, 0.0), Err(OracleError::PlanInfeasible { .. })));
    }

    #[test]
    fn ham_examples() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point::from);
        let d = DistanceMatrix::euclidean(&sq);
        assert_eq!(ham_brute(&d, Some(0)).unwrap().length, 3.0);

        let h = (3f64).sqrt() / 2.0;
        let tri = [(0.0, 0.0), (1.0, 0.0), (0.5, h)].map(Point::from);
        let d = DistanceMatrix::euclidean(&tri);
        assert!((ham_brute(&d, None).unwrap().length - 2.0).abs() < 1e-12);

        let poly =
            SimplePolygon::new([(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (2.0, 1.0)].map(Point::from).to_vec()).unwrap();
        let d = polygon_distances_brute(&poly);
        assert!(d.get(0, 2).is_infinite());
        assert!(ham_brute(&d, Some(7)).is_err());
    }

    #[test]
    fn zigzag_examples() {
        let w = CurveObjective::Weighted;
        let c = CurveInstance::new(vec![1.0; 4], vec![1.0; 4], Some(0)).unwrap();
        assert_eq!(curve_zigzag_brute(&c, w).unwrap().length, 6.0);
        let c = CurveInstance::new(vec![1.0, 1.0, 10.0], vec![1.0; 3], Some(0)).unwrap();
        let best = curve_zigzag_brute(&c, w).unwrap();
        assert_eq!((best.length, best.path), (3.0, vec![0, 1, 2]));
        let c = CurveInstance::new(vec![1.0; 21], vec![1.0; 21], None).unwrap();
        assert!(curve_zigzag_brute(&c, w).is_err());
    }

    #[test]
    fn zigzag_lengths() {
        let c = CurveInstance::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0; 4], None).unwrap();
        assert_eq!(curve_zigzag_brute(&c, CurveObjective::Length).unwrap().length, 6.0);
        // turning back through the start beats both one-way walks
        let c = CurveInstance::new(vec![1.0, 100.0, 1.0, 1.0], vec![1.0; 4], Some(0)).unwrap();
        let best = curve_zigzag_brute(&c, CurveObjective::Length).unwrap();
        assert_eq!((best.length, best.path), (4.0, vec![0, 1, 3, 2]));
    }

    #[test]
    fn graph_paths() {
        let unit = JeepParams::new(1.0, 1.0).unwrap();
        let triangle = JeepGraph::new(3, &[(0, 1, 0.4), (1, 2, 0.4), (0, 2, 0.9)]).unwrap();
        let best = jeep_graph_paths_brute(&triangle, &unit, 0).unwrap();
        assert!((best.gas - 0.8).abs() < 1e-12);
        assert_eq!(best.path, vec![0, 1, 2]);
        assert_eq!(best.shortest, 0.8);
        // one round trip leaves 1/3 at the middle, a full final load 2/3 more
        let path = JeepGraph::new(3, &[(0, 1, 1.0 / 3.0), (1, 2, 1.0)]).unwrap();
        let best = jeep_graph_paths_brute(&path, &unit, 0).unwrap();
        assert!((best.gas - 2.0).abs() < 1e-12, "{}", best.gas);
        let cut = JeepGraph::new(2, &[(0, 1, 1.5)]).unwrap();
        assert!(jeep_graph_paths_brute(&cut, &unit, 0).unwrap().gas.is_infinite());
    }
}
