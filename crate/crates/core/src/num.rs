//! Floating-point helpers shared by the solvers.

/// Relative tolerance used when snapping real-valued quotients and
/// comparing fuel quantities against capacities.
pub const REL_TOL: f64 = 1e-9;

/// Integer division of a nonnegative real by a positive real.
///
/// Returns `(q, r)` with `x = q·d + r` and `0 ≤ r < d`. A remainder within
/// `REL_TOL·d` of `d` is treated as an exact multiple, so `(q + 1, 0)` is
/// returned instead. Negative `x` is clamped to zero.
pub fn div_floor(x: f64, d: f64) -> (u64, f64) {
    debug_assert!(d > 0.0);
    let x = x.max(0.0);
    let mut q = (x / d).floor();
    let mut r = x - q * d;
    if r < 0.0 {
        q -= 1.0;
        r += d;
    }
    if q < 0.0 {
        q = 0.0;
        r = x;
    }
    if d - r <= REL_TOL * d {
        q += 1.0;
        r = 0.0;
    }
    (q as u64, r.max(0.0))
}

/// `a ≤ b` up to a relative tolerance on the larger magnitude.
pub fn le_tol(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Relative closeness, treating two infinities of the same sign as equal.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
