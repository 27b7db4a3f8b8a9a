//! The jeep problem on an undirected graph: fuel exists only at the source,
//! the jeep must reach the target, and depots sit at vertices (or anywhere,
//! depending on the variant).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use ordered_float::OrderedFloat;
use serde::Serialize;

use super::{
    continuous_optimum, segment_step_exact, subdivision_fuel, JeepError, JeepParams, Subdivision, TransferMode,
};

/// Undirected graph with the source at vertex `0` and the target at
/// vertex `n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JeepGraph {
    adj: Vec<Vec<(usize, f64)>>,
    edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinaryForward {
    /// Smallest feasible amount found, or infinity.
    pub g_min: f64,
    pub iterations: u32,
}

impl JeepGraph {
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, JeepError> {
        if n == 0 {
            return Err(JeepError::InvalidGraph("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, len) in edges {
            if u >= n || v >= n {
                return Err(JeepError::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(JeepError::InvalidGraph(format!("self-loop at {u}")));
            }
            if !(len.is_finite() && len > 0.0) {
                return Err(JeepError::InvalidGraph(format!("edge ({u}, {v}) has length {len}")));
            }
            adj[u].push((v, len));
            adj[v].push((u, len));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(JeepError::InvalidGraph(format!("vertex {v} is disconnected")));
        }
        Ok(Self { adj, edges: edges.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn target(&self) -> usize {
        self.adj.len() - 1
    }

    /// Label-setting pass from the target. `step(h_i, len)` is the amount
    /// needed at a neighbor to deliver `h_i` across an edge, or `None`.
    fn backward(&self, step: impl Fn(f64, f64) -> Option<f64>) -> Vec<f64> {
        let n = self.len();
        let mut h = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        h[self.target()] = 0.0;
        heap.push(Reverse((OrderedFloat(0.0), self.target())));
        while let Some(Reverse((OrderedFloat(hi), i))) = heap.pop() {
            if done[i] || hi > h[i] {
                continue;
            }
            done[i] = true;
            for &(j, len) in &self.adj[i] {
                if done[j] {
                    continue;
                }
                if let Some(cand) = step(hi, len) {
                    if cand < h[j] {
                        h[j] = cand;
                        heap.push(Reverse((OrderedFloat(cand), j)));
                    }
                }
            }
        }
        h
    }

    /// Minimum gas needed at each vertex to reach the target with depots
    /// only at vertices. Steps use corrected transfers, the same final-trip
    /// rule the forward candidate applies.
    pub fn min_gas_backward(&self, params: &JeepParams) -> Vec<f64> {
        self.backward(|hi, len| segment_step_exact(hi, len, params, TransferMode::Corrected).ok().map(|(f, _)| f))
    }

    /// Whether `g` gallons at the source are enough, by the forward
    /// max-gas propagation.
    pub fn forward_feasible(&self, params: &JeepParams, g: f64) -> bool {
        let n = self.len();
        let m = params.capacity;
        let mut hmax = vec![f64::NEG_INFINITY; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        hmax[0] = g;
        heap.push((OrderedFloat(g), Reverse(0usize)));
        while let Some((OrderedFloat(hi), Reverse(i))) = heap.pop() {
            if done[i] || hi < hmax[i] {
                continue;
            }
            done[i] = true;
            if i == self.target() {
                return true;
            }
            for &(j, len) in &self.adj[i] {
                if done[j] {
                    continue;
                }
                let cand = forward_candidate(hi, params.consumption * len, m);
                if cand >= 0.0 && cand > hmax[j] {
                    hmax[j] = cand;
                    heap.push((OrderedFloat(cand), Reverse(j)));
                }
            }
        }
        hmax[self.target()] >= 0.0
    }

    /// Binary search on the gas at the source, bracketed by the backward
    /// answer (doubled until feasible if the forward test disagrees).
    pub fn min_gas_binary_forward(&self, params: &JeepParams, eps: f64) -> BinaryForward {
        let mut iterations = 0;
        let mut hi = self.min_gas_backward(params)[0];
        if !hi.is_finite() {
            return BinaryForward { g_min: f64::INFINITY, iterations };
        }
        while !self.forward_feasible(params, hi) {
            iterations += 1;
            hi = hi.max(params.capacity) * 2.0;
            if iterations > 64 {
                return BinaryForward { g_min: f64::INFINITY, iterations };
            }
        }
        let mut lo = 0.0;
        if self.forward_feasible(params, lo) {
            return BinaryForward { g_min: 0.0, iterations };
        }
        while hi - lo > eps {
            iterations += 1;
            let mid = lo + (hi - lo) / 2.0;
            if self.forward_feasible(params, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        BinaryForward { g_min: hi, iterations }
    }

    /// Shortest source-target distance.
    pub fn shortest_path(&self) -> f64 {
        self.backward(|hi, len| Some(hi + len))[0]
    }

    /// Minimum gas when depots may sit anywhere along the edges.
    pub fn free_depots(&self, params: &JeepParams) -> f64 {
        continuous_optimum(self.shortest_path(), params)
    }

    /// Minimum gas per vertex when depots must sit at vertices and may also
    /// sit at `k_per_edge` equally spaced points inside each edge.
    pub fn vertex_depots_continuous(&self, params: &JeepParams, k_per_edge: u64) -> Vec<f64> {
        self.backward(|hi, len| {
            Subdivision::equal(len, k_per_edge)
                .and_then(|d| subdivision_fuel(&d, params, hi, TransferMode::Corrected))
                .ok()
        })
    }
}

/// Gas that can be brought across an edge burning `e` per crossing when
/// `hmax` gallons are available at its near end.
pub fn forward_candidate(hmax: f64, e: f64, m: f64) -> f64 {
    let avail = hmax.min(m);
    if 2.0 * e >= avail {
        return avail - e;
    }
    let q = (hmax / m).floor();
    let r = hmax - q * m;
    let c1 = (q - 1.0) * (m - 2.0 * e) + m - e;
    if r < e {
        c1
    } else {
        c1.max(q * (m - 2.0 * e) + r - e)
    }
}
