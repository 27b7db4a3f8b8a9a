//! Minimum initial fuel for a depth-first tree traversal.
//!
//! A single vehicle starts at the root, must visit every vertex, crosses
//! every edge exactly twice and returns to the root. Vertex `i` holds
//! `gas[i]` units collected on first arrival; crossing an edge burns its
//! length. We compute the smallest starting fuel that keeps the tank
//! nonnegative throughout.
//!
//! `Cmin(i)` is found bottom-up by binary search, where the feasibility test
//! greedily enters the affordable child subtree with the largest net fuel
//! profit.

use serde::Serialize;
use thiserror::Error;

use crate::segtree::MaxSegmentTree;
use crate::tree::RootedTree;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuelError {
    #[error("expected {expected} gas values, got {got}")]
    GasCount { expected: usize, got: usize },
    #[error("gas at vertex {vertex} must be finite and nonnegative, got {value}")]
    BadGas { vertex: usize, value: f64 },
    #[error("integer mode requires integral values; {what} at vertex {vertex} is {value}")]
    NonIntegral { what: &'static str, vertex: usize, value: f64 },
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ValueMode {
    /// All lengths and gas amounts are integers; the search is exact.
    Integer,
    /// Real values; the search stops once the bracket is narrower than `epsilon`.
    Real { epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Naive,
    #[serde(rename = "segtree")]
    SegmentTree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuelInstance {
    tree: RootedTree,
    gas: Vec<f64>,
    mode: ValueMode,
}

impl FuelInstance {
    pub fn new(tree: RootedTree, gas: Vec<f64>, mode: ValueMode) -> Result<Self, FuelError> {
        if gas.len() != tree.len() {
            return Err(FuelError::GasCount { expected: tree.len(), got: gas.len() });
        }
        for (vertex, &value) in gas.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(FuelError::BadGas { vertex, value });
            }
        }
        match mode {
            ValueMode::Integer => {
                for (vertex, &value) in gas.iter().enumerate() {
                    if value.fract() != 0.0 {
                        return Err(FuelError::NonIntegral { what: "gas", vertex, value });
                    }
                }
                for vertex in 0..tree.len() {
                    let value = tree.edge_len(vertex);
                    if value.fract() != 0.0 {
                        return Err(FuelError::NonIntegral { what: "edge length", vertex, value });
                    }
                }
            }
            ValueMode::Real { epsilon } => {
                if epsilon.is_nan() || epsilon <= 0.0 {
                    return Err(FuelError::BadEpsilon(epsilon));
                }
            }
        }
        Ok(Self { tree, gas, mode })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn gas(&self) -> &[f64] {
        &self.gas
    }

    pub fn mode(&self) -> ValueMode {
        self.mode
    }
}

/// Per-vertex subtree aggregates. `fprofit` and `fmin` are zero at the root,
/// where they are undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuelPreprocess {
    pub lsum: Vec<f64>,
    pub gsum: Vec<f64>,
    pub fprofit: Vec<f64>,
    pub fmin: Vec<f64>,
}

impl FuelPreprocess {
    fn zeroed(n: usize) -> Self {
        Self { lsum: vec![0.0; n], gsum: vec![0.0; n], fprofit: vec![0.0; n], fmin: vec![0.0; n] }
    }

    /// Fills the aggregates for `u` from its children's values and `cmin_u`.
    fn fill(&mut self, inst: &FuelInstance, u: usize, cmin_u: f64) {
        let tree = inst.tree();
        let mut lsum = 0.0;
        let mut gsum = inst.gas[u];
        for &c in tree.children(u) {
            lsum += tree.edge_len(c) + self.lsum[c];
            gsum += self.gsum[c];
        }
        self.lsum[u] = lsum;
        self.gsum[u] = gsum;
        if u != tree.root() {
            let up = tree.edge_len(u);
            self.fprofit[u] = gsum - 2.0 * lsum - 2.0 * up;
            self.fmin[u] = (cmin_u + up).max(-self.fprofit[u]);
        }
    }
}

/// Computes all four aggregate arrays in one bottom-up pass from known
/// `Cmin` values.
pub fn preprocess(inst: &FuelInstance, cmin: &[f64]) -> FuelPreprocess {
    let mut pre = FuelPreprocess::zeroed(inst.tree().len());
    for u in inst.tree().postorder() {
        pre.fill(inst, u, cmin[u]);
    }
    pre
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Children in the order the greedy entered them (partial when infeasible).
    pub order: Vec<usize>,
}

/// Children of one vertex sorted by `(Fmin, id)`, reused across probes.
struct ChildSchedule {
    sorted: Vec<usize>,
    fmins: Vec<f64>,
    profits: Vec<f64>,
}

impl ChildSchedule {
    fn new(tree: &RootedTree, pre: &FuelPreprocess, u: usize) -> Self {
        let mut sorted = tree.children(u).to_vec();
        sorted.sort_by(|&a, &b| pre.fmin[a].total_cmp(&pre.fmin[b]).then(a.cmp(&b)));
        let fmins = sorted.iter().map(|&c| pre.fmin[c]).collect();
        let profits = sorted.iter().map(|&c| pre.fprofit[c]).collect();
        Self { sorted, fmins, profits }
    }

    fn probe(&self, start: f64) -> Feasibility {
        let mut fuel = start;
        let mut tree = MaxSegmentTree::new(&self.profits);
        let mut order = Vec::with_capacity(self.sorted.len());
        for _ in 0..self.sorted.len() {
            let affordable = self.fmins.partition_point(|&f| f <= fuel);
            match tree.prefix_max(affordable).expect("prefix within range") {
                Some((profit, leaf)) => {
                    tree.disable(leaf).expect("leaf within range");
                    order.push(self.sorted[leaf]);
                    fuel += profit;
                }
                None => return Feasibility { feasible: false, order },
            }
        }
        Feasibility { feasible: true, order }
    }
}

fn probe_naive(tree: &RootedTree, pre: &FuelPreprocess, u: usize, start: f64) -> Feasibility {
    let mut fuel = start;
    let mut remaining: Vec<usize> = tree.children(u).to_vec();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut pick: Option<usize> = None;
        for (pos, &c) in remaining.iter().enumerate() {
            if pre.fmin[c] > fuel {
                continue;
            }
            let better = match pick {
                None => true,
                Some(p) => {
                    let b = remaining[p];
                    let key = |v: usize| (pre.fprofit[v], -pre.fmin[v], std::cmp::Reverse(v));
                    let (ka, kb) = (key(c), key(b));
                    ka.0 > kb.0 || (ka.0 == kb.0 && (ka.1 > kb.1 || (ka.1 == kb.1 && ka.2 > kb.2)))
                }
            };
            if better {
                pick = Some(pos);
            }
        }
        match pick {
            Some(pos) => {
                let c = remaining.swap_remove(pos);
                fuel += pre.fprofit[c];
                order.push(c);
            }
            None => return Feasibility { feasible: false, order },
        }
    }
    Feasibility { feasible: true, order }
}

/// Greedy feasibility test at vertex `u` with `candidate` initial fuel.
///
/// Requires `fmin` and `fprofit` of every child of `u` in `pre`. Both
/// engines break profit ties by smaller `Fmin`, then smaller child id, so
/// they produce identical orders.
pub fn feasible(inst: &FuelInstance, pre: &FuelPreprocess, u: usize, candidate: f64, engine: Engine) -> Feasibility {
    let start = candidate + inst.gas[u];
    match engine {
        Engine::Naive => probe_naive(inst.tree(), pre, u, start),
        Engine::SegmentTree => ChildSchedule::new(inst.tree(), pre, u).probe(start),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuelSolution {
    /// Minimum initial fuel at the root.
    pub cmin: f64,
    /// `Cmin(i)` for every vertex's subtree.
    pub per_vertex: Vec<f64>,
    /// Closed walk from the root realizing `cmin`.
    pub route: Vec<usize>,
    /// Feasibility probes issued by the binary searches.
    pub probes: usize,
}

/// Bottom-up `Cmin` computation with binary search at every internal vertex.
pub fn min_initial_fuel(inst: &FuelInstance, engine: Engine) -> FuelSolution {
    let tree = inst.tree();
    let n = tree.len();
    let upper = 2.0 * tree.total_length();
    let mut pre = FuelPreprocess::zeroed(n);
    let mut cmin = vec![0.0; n];
    let mut orders: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut probes = 0;

    for u in tree.postorder() {
        if !tree.is_leaf(u) {
            let schedule = (engine == Engine::SegmentTree).then(|| ChildSchedule::new(tree, &pre, u));
            let pre = &pre;
            let mut run = |candidate: f64| {
                probes += 1;
                let start = candidate + inst.gas[u];
                match &schedule {
                    Some(s) => s.probe(start),
                    None => probe_naive(tree, pre, u, start),
                }
            };
            let (value, order) = search_minimum(inst.mode, upper, &mut run);
            cmin[u] = value;
            orders[u] = order;
        }
        pre.fill(inst, u, cmin[u]);
    }

    let route = expand_route(tree, &orders);
    FuelSolution { cmin: cmin[tree.root()], per_vertex: cmin, route, probes }
}

/// Smallest feasible value in `[0, upper]` and the child order found at it.
fn search_minimum(mode: ValueMode, upper: f64, run: &mut impl FnMut(f64) -> Feasibility) -> (f64, Vec<usize>) {
    let at_zero = run(0.0);
    if at_zero.feasible {
        return (0.0, at_zero.order);
    }
    match mode {
        ValueMode::Integer => {
            let (mut lo, mut hi) = (0i64, upper.round() as i64);
            let mut best = None;
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                let probe = run(mid as f64);
                if probe.feasible {
                    hi = mid;
                    best = Some(probe.order);
                } else {
                    lo = mid;
                }
            }
            let order = best.unwrap_or_else(|| run(hi as f64).order);
            (hi as f64, order)
        }
        ValueMode::Real { epsilon } => {
            let (mut lo, mut hi) = (0.0, upper);
            let mut best = None;
            while hi - lo >= epsilon {
                let mid = 0.5 * (lo + hi);
                let probe = run(mid);
                if probe.feasible {
                    hi = mid;
                    best = Some(probe.order);
                } else {
                    lo = mid;
                }
            }
            let order = best.unwrap_or_else(|| run(hi).order);
            (hi, order)
        }
    }
}

fn expand_route(tree: &RootedTree, orders: &[Vec<usize>]) -> Vec<usize> {
    let mut route = vec![tree.root()];
    let mut stack: Vec<(usize, usize)> = vec![(tree.root(), 0)];
    while let Some(top) = stack.last_mut() {
        let (u, next) = *top;
        if let Some(&c) = orders[u].get(next) {
            top.1 += 1;
            route.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                route.push(p);
            }
        }
    }
    route
}

/// Replays a closed walk from `initial` fuel, returning the lowest tank
/// level seen. Gas is collected on first arrival at each vertex.
pub fn simulate_route(inst: &FuelInstance, route: &[usize], initial: f64) -> f64 {
    let tree = inst.tree();
    let mut seen = vec![false; tree.len()];
    let mut fuel = initial;
    let mut lowest = fuel;
    if let Some(&first) = route.first() {
        seen[first] = true;
        fuel += inst.gas[first];
    }
    for w in route.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = if tree.parent(b) == Some(a) { tree.edge_len(b) } else { tree.edge_len(a) };
        fuel -= len;
        lowest = lowest.min(fuel);
        if !seen[b] {
            seen[b] = true;
            fuel += inst.gas[b];
        }
    }
    lowest
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_ab(mode: ValueMode) -> FuelInstance {
        let tree = RootedTree::new(3, &[(0, 1, 1.0), (0, 2, 5.0)], 0).unwrap();
        FuelInstance::new(tree, vec![0.0, 10.0, 0.0], mode).unwrap()
    }

    fn chain2(gas0: f64) -> FuelInstance {
        let tree = RootedTree::new(2, &[(0, 1, 2.0)], 0).unwrap();
        FuelInstance::new(tree, vec![gas0, 0.0], ValueMode::Integer).unwrap()
    }

    #[test]
    fn preprocess_values() {
        let inst = star_ab(ValueMode::Integer);
        let pre = preprocess(&inst, &[0.0, 0.0, 0.0]);
        assert_eq!(pre.lsum, vec![6.0, 0.0, 0.0]);
        assert_eq!(pre.gsum, vec![10.0, 10.0, 0.0]);
        assert_eq!(pre.fprofit[1], 8.0);
        assert_eq!(pre.fmin[2], 10.0);
    }

    #[test]
    fn feasibility_examples() {
        let inst = star_ab(ValueMode::Real { epsilon: 1e-6 });
        let pre = preprocess(&inst, &[0.0, 0.0, 0.0]);
        for engine in [Engine::Naive, Engine::SegmentTree] {
            let leaf = feasible(&inst, &pre, 1, 0.0, engine);
            assert!(leaf.feasible && leaf.order.is_empty());
            let ok = feasible(&inst, &pre, 0, 2.0, engine);
            assert!(ok.feasible);
            assert_eq!(ok.order, vec![1, 2]);
            assert!(!feasible(&inst, &pre, 0, 1.9, engine).feasible);
        }
    }

    #[test]
    fn min_fuel_examples() {
        let single = FuelInstance::new(RootedTree::new(1, &[], 0).unwrap(), vec![0.0], ValueMode::Integer).unwrap();
        assert_eq!(min_initial_fuel(&single, Engine::SegmentTree).cmin, 0.0);
        assert_eq!(min_initial_fuel(&chain2(0.0), Engine::SegmentTree).cmin, 4.0);
        assert_eq!(min_initial_fuel(&chain2(5.0), Engine::Naive).cmin, 0.0);
        let sol = min_initial_fuel(&star_ab(ValueMode::Integer), Engine::SegmentTree);
        assert_eq!(sol.cmin, 2.0);
        assert_eq!(sol.route, vec![0, 1, 0, 2, 0]);
        assert_eq!(simulate_route(&star_ab(ValueMode::Integer), &sol.route, sol.cmin), 0.0);
    }

    #[test]
    fn real_mode_within_epsilon() {
        let inst = star_ab(ValueMode::Real { epsilon: 1e-6 });
        let sol = min_initial_fuel(&inst, Engine::SegmentTree);
        assert!(sol.cmin >= 2.0 && sol.cmin < 2.0 + 1e-6);
    }

    #[test]
    fn validation() {
        let tree = RootedTree::new(2, &[(0, 1, 1.5)], 0).unwrap();
        assert!(matches!(
            FuelInstance::new(tree.clone(), vec![0.0, 0.0], ValueMode::Integer),
            Err(FuelError::NonIntegral { .. })
        ));
        assert!(matches!(
            FuelInstance::new(tree.clone(), vec![0.0], ValueMode::Real { epsilon: 1e-6 }),
            Err(FuelError::GasCount { .. })
        ));
        assert!(matches!(
            FuelInstance::new(tree.clone(), vec![0.0, -1.0], ValueMode::Real { epsilon: 1e-6 }),
            Err(FuelError::BadGas { .. })
        ));
        assert!(matches!(
            FuelInstance::new(tree, vec![0.0, 0.0], ValueMode::Real { epsilon: 0.0 }),
            Err(FuelError::BadEpsilon(_))
        ));
    }
}
