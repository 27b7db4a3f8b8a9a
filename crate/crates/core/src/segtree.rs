//! Prefix-maximum segment tree with leaf disabling.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("segment tree index {index} out of range (size {size})")]
pub struct IndexOutOfRange {
    pub index: usize,
    pub size: usize,
}

/// Bottom-up max segment tree over `size` leaves.
///
/// Each node stores the maximum value in its range together with the leaf
/// attaining it; ties resolve to the leftmost leaf. Disabled leaves hold
/// minus infinity and are never reported.
#[derive(Debug, Clone)]
pub struct MaxSegmentTree {
    size: usize,
    base: usize,
    nodes: Vec<(f64, usize)>,
}

fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

const EMPTY: (f64, usize) = (f64::NEG_INFINITY, usize::MAX);

impl MaxSegmentTree {
    pub fn new(values: &[f64]) -> Self {
        let size = values.len();
        let base = size.next_power_of_two().max(1);
        let mut nodes = vec![EMPTY; 2 * base];
        for (i, &v) in values.iter().enumerate() {
            nodes[base + i] = (v, i);
        }
        for q in (1..base).rev() {
            nodes[q] = better(nodes[2 * q], nodes[2 * q + 1]);
        }
        Self { size, base, nodes }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Maximum over leaves `0..end` as `(value, leaf)`, or `None` when every
    /// leaf in the prefix is disabled or the prefix is empty.
    pub fn prefix_max(&self, end: usize) -> Result<Option<(f64, usize)>, IndexOutOfRange> {
        if end > self.size {
            return Err(IndexOutOfRange { index: end, size: self.size });
        }
        let mut best = EMPTY;
        let (mut lo, mut hi) = (self.base, self.base + end);
        while lo < hi {
            if lo & 1 == 1 {
                best = better(best, self.nodes[lo]);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                best = better(best, self.nodes[hi]);
            }
            lo >>= 1;
            hi >>= 1;
        }
        Ok((best.0 > f64::NEG_INFINITY).then_some(best))
    }

    /// Sets leaf `index` to minus infinity and repairs its ancestors.
    pub fn disable(&mut self, index: usize) -> Result<(), IndexOutOfRange> {
        if index >= self.size {
            return Err(IndexOutOfRange { index, size: self.size });
        }
        let mut q = self.base + index;
        self.nodes[q] = (f64::NEG_INFINITY, index);
        while q > 1 {
            q >>= 1;
            self.nodes[q] = better(self.nodes[2 * q], self.nodes[2 * q + 1]);
        }
        Ok(())
    }
}
