//! Bracketed bisection for monotone-crossing root problems.

/// Outcome of a bisection run.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Bisects `f` on `[lo, hi]` assuming `f(lo) > 0 > f(hi)` (sign handed in via
/// the precomputed endpoint values). Stops when the bracket width drops below
/// `tol(x)` evaluated at the midpoint, or after `max_iter` halvings.
pub fn bisect_decreasing<F, T>(mut f: F, mut lo: f64, mut hi: f64, tol: T, max_iter: u32) -> Root
where
    F: FnMut(f64) -> f64,
    T: Fn(f64) -> f64,
{
    debug_assert!(lo < hi);
    let mut iterations = 0;
    while iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol(mid) || mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Root {
        x: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
    }
}

/// Inverts a nondecreasing function: finds x in `[lo, hi]` with `g(x) = target`.
/// Endpoints are trusted brackets (`g(lo) <= target <= g(hi)`).
pub fn invert_monotone<F>(g: F, target: f64, lo: f64, hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let root = bisect_decreasing(|x| target - g(x), lo, hi, |x| tol * (1.0 + x.abs()), 200);
    root.x
}
