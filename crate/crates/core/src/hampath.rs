//! Shortest Hamiltonian paths whose visited set is always a circular interval
//! of the vertex order: polygon vertices joined by segments inside the
//! polygon, and vertices on a closed curve with weighted arrival times.
//!
//! Both problems run on one `O(n²)` table pair. `A(i, j)` is the cheapest
//! path covering the interval `[i, j]` and ending at `i`, and `B(i, j)` the
//! same ending at `j`.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{on_segment, orientation, segment_inside, segments_intersect, signed_area2, Point};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFew(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertices {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("edges meeting at vertex {0} fold back on each other")]
    Overlap(usize),
    #[error("vertices must be in counterclockwise order")]
    Clockwise,
    #[error("start vertex {start} out of range for {n} vertices")]
    StartOutOfRange { start: usize, n: usize },
    #[error("curve needs matching positive gaps and non-negative weights: {0}")]
    InvalidCurve(String),
}

/// Simple polygon in counterclockwise order. Edge `i` joins vertex `i` to
/// vertex `i + 1 mod n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, PolygonError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFew(n));
        }
        if let Some(i) = vertices.iter().position(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(PolygonError::NonFinite(i));
        }
        for i in 0..n {
            for j in i + 1..n {
                if vertices[i] == vertices[j] {
                    return Err(PolygonError::Duplicate(i, j));
                }
            }
        }
        let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
        for i in 0..n {
            let (prev, cur, next) = (vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]);
            if on_segment(cur, next, prev) || on_segment(prev, cur, next) {
                return Err(PolygonError::Overlap(i));
            }
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_intersect(edge(i), edge(j)) {
                    return Err(PolygonError::SelfIntersecting(i, j));
                }
            }
        }
        if signed_area2(&vertices) <= 0.0 {
            return Err(PolygonError::Clockwise);
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// No reflex vertex (straight angles allowed).
    pub fn is_convex(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| orientation(self.vertices[(i + n - 1) % n], self.vertices[i], self.vertices[(i + 1) % n]) >= 0)
    }

    /// Pairwise visibility by the naive `O(n³)` test.
    pub fn visibility(&self) -> VisibilityMatrix {
        let n = self.len();
        let mut vis = VisibilityMatrix { n, visible: vec![true; n * n] };
        if self.is_convex() {
            return vis;
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let ok = segment_inside(&self.vertices, self.vertices[i], self.vertices[j]);
                vis.visible[i * n + j] = ok;
                vis.visible[j * n + i] = ok;
            }
        }
        vis
    }

    /// Shortest Hamiltonian path inside the polygon.
    pub fn shortest_ham_path(&self, start: Option<usize>) -> Result<HamPath, PolygonError> {
        let dist = DistanceMatrix::from_polygon(self);
        match start {
            Some(s) => shortest_ham_path_fixed_start(&dist, s),
            None => Ok(shortest_ham_path_free_start(&dist)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityMatrix {
    n: usize,
    visible: Vec<bool>,
}

impl VisibilityMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.visible[i * self.n + j]
    }

    pub fn all_visible(&self) -> bool {
        self.visible.iter().all(|&v| v)
    }
}

/// Travel costs between vertices; infinity forbids a direct move.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut d = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                d.push(if i == j { 0.0 } else { f(i, j) });
            }
        }
        Self { n, d }
    }

    /// Complete Euclidean distances.
    pub fn euclidean(points: &[Point]) -> Self {
        Self::from_fn(points.len(), |i, j| points[i].dist(points[j]))
    }

    /// Euclidean distance between visible vertices, infinity otherwise.
    pub fn from_polygon(poly: &SimplePolygon) -> Self {
        let vis = poly.visibility();
        let v = poly.vertices();
        Self::from_fn(v.len(), |i, j| if vis.get(i, j) { v[i].dist(v[j]) } else { f64::INFINITY })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Sets both directions of a pair.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.d[i * self.n + j] = value;
        self.d[j * self.n + i] = value;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HamPath {
    /// Total cost, or infinity when no admissible path exists.
    pub length: f64,
    /// Visit order; empty when `length` is infinite.
    pub path: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Table {
    A,
    B,
}

/// Fills both tables over circular intervals of growing size.
///
/// `step(from, to, i, j)` is the cost of extending the interval `[i, j]` by
/// moving from its endpoint `from` to the new vertex `to`.
fn interval_dp(n: usize, diag: impl Fn(usize) -> f64, step: impl Fn(usize, usize, usize, usize) -> f64) -> HamPath {
    if n == 0 {
        return HamPath { length: 0.0, path: Vec::new() };
    }
    let at = |i: usize, j: usize| i * n + j;
    let mut a = vec![f64::INFINITY; n * n];
    let mut b = vec![f64::INFINITY; n * n];
    // false: extended from the same table, true: from the other one
    let mut a_switch = vec![false; n * n];
    let mut b_switch = vec![false; n * n];
    for i in 0..n {
        a[at(i, i)] = diag(i);
        b[at(i, i)] = diag(i);
    }
    for size in 2..=n {
        for i in 0..n {
            let j = (i + size - 1) % n;
            let i1 = (i + 1) % n;
            let j1 = (j + n - 1) % n;

            let same = a[at(i1, j)] + step(i1, i, i1, j);
            let other = b[at(i1, j)] + step(j, i, i1, j);
            a[at(i, j)] = same.min(other);
            a_switch[at(i, j)] = other < same;

            let same = b[at(i, j1)] + step(j1, j, i, j1);
            let other = a[at(i, j1)] + step(i, j, i, j1);
            b[at(i, j)] = same.min(other);
            b_switch[at(i, j)] = other < same;
        }
    }

    let mut best = (f64::INFINITY, Table::A, 0, 0);
    for j in 0..n {
        let i = (j + 1) % n;
        for (table, value) in [(Table::A, a[at(i, j)]), (Table::B, b[at(i, j)])] {
            if value < best.0 {
                best = (value, table, i, j);
            }
        }
    }
    let (length, mut table, mut i, mut j) = best;
    if !length.is_finite() {
        return HamPath { length, path: Vec::new() };
    }
    let mut path = Vec::with_capacity(n);
    while i != j {
        match table {
            Table::A => {
                path.push(i);
                if a_switch[at(i, j)] {
                    table = Table::B;
                }
                i = (i + 1) % n;
            }
            Table::B => {
                path.push(j);
                if b_switch[at(i, j)] {
                    table = Table::A;
                }
                j = (j + n - 1) % n;
            }
        }
    }
    path.push(i);
    path.reverse();
    HamPath { length, path }
}

/// Shortest interval-respecting Hamiltonian path starting at `s`.
pub fn shortest_ham_path_fixed_start(dist: &DistanceMatrix, s: usize) -> Result<HamPath, PolygonError> {
    let n = dist.len();
    if s >= n {
        return Err(PolygonError::StartOutOfRange { start: s, n });
    }
    Ok(interval_dp(n, |i| if i == s { 0.0 } else { f64::INFINITY }, |from, to, _, _| dist.get(from, to)))
}

/// Shortest interval-respecting Hamiltonian path from any start.
pub fn shortest_ham_path_free_start(dist: &DistanceMatrix) -> HamPath {
    interval_dp(dist.len(), |_| 0.0, |from, to, _, _| dist.get(from, to))
}

/// Vertices on a closed curve; `gaps[i]` is the arc from vertex `i` to
/// vertex `i + 1 mod n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveInstance {
    gaps: Vec<f64>,
    weights: Vec<f64>,
    start: Option<usize>,
    gap_prefix: Vec<f64>,
    weight_prefix: Vec<f64>,
}

fn prefix(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(0.0);
    for v in values {
        out.push(out[out.len() - 1] + v);
    }
    out
}

impl CurveInstance {
    pub fn new(gaps: Vec<f64>, weights: Vec<f64>, start: Option<usize>) -> Result<Self, PolygonError> {
        let n = gaps.len();
        if n == 0 {
            return Err(PolygonError::InvalidCurve("no vertices".into()));
        }
        if weights.len() != n {
            return Err(PolygonError::InvalidCurve(format!("{n} gaps but {} weights", weights.len())));
        }
        if let Some(i) = gaps.iter().position(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(PolygonError::InvalidCurve(format!("gap {i} is {}", gaps[i])));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(PolygonError::InvalidCurve(format!("weight {i} is {}", weights[i])));
        }
        if let Some(s) = start.filter(|&s| s >= n) {
            return Err(PolygonError::StartOutOfRange { start: s, n });
        }
        let gap_prefix = prefix(&gaps);
        let weight_prefix = prefix(&weights);
        Ok(Self { gaps, weights, start, gap_prefix, weight_prefix })
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    pub fn total(&self) -> f64 {
        self.gap_prefix[self.len()]
    }

    /// Weight of the circular interval `[a, b]`.
    pub fn wsum(&self, a: usize, b: usize) -> f64 {
        let wp = &self.weight_prefix;
        if a <= b {
            wp[b + 1] - wp[a]
        } else {
            wp[self.len()] - wp[a] + wp[b + 1]
        }
    }

    /// Forward arc length from `i` to `j`.
    pub fn dsum(&self, i: usize, j: usize) -> f64 {
        let gp = &self.gap_prefix;
        if i <= j {
            gp[j] - gp[i]
        } else {
            self.total() - (gp[i] - gp[j])
        }
    }

    /// Shorter way around the curve between `a` and `b`.
    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.dsum(a, b).min(self.dsum(b, a))
    }
}

/// Shortest path through every curve vertex: walk the whole curve except
/// its longest skippable gap.
pub fn curve_ham_path(inst: &CurveInstance) -> f64 {
    let n = inst.len();
    if n == 1 {
        return 0.0;
    }
    let skipped = match inst.start {
        Some(s) => inst.gaps[s].max(inst.gaps[(s + n - 1) % n]),
        None => inst.gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    };
    inst.total() - skipped
}

/// Minimum weighted sum of arrival distances `Σ wᵢ·dt(i)`.
pub fn curve_weighted_ham_path(inst: &CurveInstance) -> HamPath {
    let n = inst.len();
    let start = inst.start;
    interval_dp(
        n,
        |i| if start.is_none_or(|s| s == i) { 0.0 } else { f64::INFINITY },
        |from, to, i, j| {
            if n == 1 {
                return 0.0;
            }
            // everyone outside [i, j] is still waiting
            inst.dist(from, to) * inst.wsum((j + 1) % n, (i + n - 1) % n)
        },
    )
}
