//! Planar predicates used by the polygon visibility test.

use serde::{Deserialize, Serialize};

/// Relative tolerance for collinearity.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

fn cross(p: Point, q: Point, r: Point) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// Sign of the turn `p → q → r`: `1` counterclockwise, `-1` clockwise, `0`
/// when collinear within tolerance.
pub fn orientation(p: Point, q: Point, r: Point) -> i8 {
    let c = cross(p, q, r);
    let scale = ((q.x - p.x).abs() + (q.y - p.y).abs()) * ((r.x - p.x).abs() + (r.y - p.y).abs());
    if c.abs() <= GEOM_TOL * scale.max(f64::MIN_POSITIVE) {
        0
    } else if c > 0.0 {
        1
    } else {
        -1
    }
}

/// `r` lies on the closed segment `pq`, assuming collinearity.
fn within_box(p: Point, q: Point, r: Point) -> bool {
    let tol = GEOM_TOL * (1.0 + p.x.abs().max(q.x.abs()).max(p.y.abs()).max(q.y.abs()));
    r.x >= p.x.min(q.x) - tol && r.x <= p.x.max(q.x) + tol && r.y >= p.y.min(q.y) - tol && r.y <= p.y.max(q.y) + tol
}

pub fn on_segment(p: Point, q: Point, r: Point) -> bool {
    orientation(p, q, r) == 0 && within_box(p, q, r)
}

/// The open segments cross at a single interior point of both.
pub fn segments_properly_intersect(a: (Point, Point), b: (Point, Point)) -> bool {
    let o1 = orientation(a.0, a.1, b.0);
    let o2 = orientation(a.0, a.1, b.1);
    let o3 = orientation(b.0, b.1, a.0);
    let o4 = orientation(b.0, b.1, a.1);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// The closed segments share at least one point.
pub fn segments_intersect(a: (Point, Point), b: (Point, Point)) -> bool {
    if segments_properly_intersect(a, b) {
        return true;
    }
    on_segment(a.0, a.1, b.0) || on_segment(a.0, a.1, b.1) || on_segment(b.0, b.1, a.0) || on_segment(b.0, b.1, a.1)
}

/// Twice the signed area; positive for counterclockwise order.
pub fn signed_area2(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum()
}

/// Ray-crossing containment test; boundary points count as inside.
pub fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if on_segment(a, b, p) {
            return true;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Whether the closed segment `pq` lies within the closed polygon region.
///
/// The segment is split at every polygon vertex it passes through, and the
/// midpoint of each piece must be inside; any proper crossing of an edge
/// rejects it immediately.
pub fn segment_inside(poly: &[Point], p: Point, q: Point) -> bool {
    let n = poly.len();
    let mut cuts = vec![0.0, 1.0];
    let len2 = (q.x - p.x).powi(2) + (q.y - p.y).powi(2);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if segments_properly_intersect((p, q), (a, b)) {
            return false;
        }
        if len2 > 0.0 && on_segment(p, q, a) {
            let t = ((a.x - p.x) * (q.x - p.x) + (a.y - p.y) * (q.y - p.y)) / len2;
            if t > GEOM_TOL && t < 1.0 - GEOM_TOL {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2).all(|w| point_in_polygon(poly, p.lerp(q, (w[0] + w[1]) / 2.0)))
}
