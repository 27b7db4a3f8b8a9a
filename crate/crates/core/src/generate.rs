//! Seeded random instances for tests and benchmarks.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;
use crate::hampath::SimplePolygon;

pub type Edges = Vec<(usize, usize, f64)>;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tree on `n` vertices rooted at `0` with integer lengths in
/// `1..=max_len`. Each vertex attaches to an earlier vertex with fewer than
/// `max_children` children (unbounded when `None`).
pub fn random_tree(rng: &mut impl Rng, n: usize, max_children: Option<usize>, max_len: u32) -> Edges {
    let cap = max_children.unwrap_or(usize::MAX).max(1);
    let mut kids = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let slot = rng.gen_range(0..open.len());
        let u = open[slot];
        kids[u] += 1;
        if kids[u] == cap {
            open.swap_remove(slot);
        }
        open.push(v);
        edges.push((u, v, rng.gen_range(1..=max_len) as f64));
    }
    edges
}

/// Integer gas amounts in `0..=max`.
pub fn random_gas(rng: &mut impl Rng, n: usize, max: u32) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0..=max) as f64).collect()
}

/// Sorted distinct angles with every gap below `max_gap`.
fn angles(rng: &mut impl Rng, n: usize, max_gap: f64) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        a.sort_by(f64::total_cmp);
        let ok = (0..n).all(|i| {
            let gap = if i + 1 < n { a[i + 1] - a[i] } else { a[0] + TAU - a[i] };
            gap > 1e-3 && gap < max_gap
        });
        if ok {
            return a;
        }
    }
}

/// Vertices on a circle: strictly convex, counterclockwise.
pub fn convex_polygon(rng: &mut impl Rng, n: usize) -> SimplePolygon {
    let r = rng.gen_range(1.0..10.0);
    let v = angles(rng, n, TAU).into_iter().map(|t| Point::new(r * t.cos(), r * t.sin())).collect();
    SimplePolygon::new(v).expect("points on a circle in angular order form a convex polygon")
}

/// Star-shaped polygon around the origin with random radii, usually with
/// reflex vertices.
pub fn star_polygon(rng: &mut impl Rng, n: usize) -> SimplePolygon {
    loop {
        let v = angles(rng, n, std::f64::consts::PI * 0.9)
            .into_iter()
            .map(|t| {
                let r = rng.gen_range(0.2..1.0);
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        if let Ok(p) = SimplePolygon::new(v) {
            return p;
        }
    }
}

/// Connected graph: a random spanning tree plus `extra` additional edges,
/// lengths uniform in `len_range`. Shuffled so the source and target are
/// not special in the tree shape.
pub fn random_graph(rng: &mut impl Rng, n: usize, extra: usize, len_range: std::ops::Range<f64>) -> Edges {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[j], order[i], rng.gen_range(len_range.clone())));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                edges.push((u, v, rng.gen_range(len_range.clone())));
            }
        }
    }
    edges
}

/// Integer values in `lo..=hi`, as floats.
pub fn int_values(rng: &mut impl Rng, n: usize, lo: u32, hi: u32) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..=hi) as f64).collect()
}
