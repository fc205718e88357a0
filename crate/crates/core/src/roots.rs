//! Bracketed one-dimensional root finding shared by the index and `K_inf`
//! solvers.

/// Default absolute tolerance on the bracket width.
pub(crate) const TOLERANCE: f64 = 1e-9;

/// Default iteration cap.
pub(crate) const MAX_ITERATIONS: usize = 100;

/// Locates the crossing of a nondecreasing function `g` on `[lo, hi]`.
///
/// Requires `g(lo) <= 0 < g(hi)`; `g` returns `(value, derivative)`. Newton
/// steps are taken whenever they stay strictly inside the current bracket,
/// otherwise the bracket is bisected. Returns the left end of the final
/// bracket, so the result always satisfies `g(x) <= 0` and lies within `tol`
/// of the crossing.
pub(crate) fn increasing_root<G>(mut g: G, mut lo: f64, mut hi: f64, x0: f64, tol: f64) -> f64
where
    G: FnMut(f64) -> (f64, f64),
{
    let mut x = if x0 > lo && x0 < hi {
        x0
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..MAX_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        let (value, slope) = g(x);
        if value == 0.0 {
            return x;
        }
        if value < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= tol {
            break;
        }

        let mut next = x - value / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        } else if (next - x).abs() < 0.25 * tol {
            // Newton has stalled on one side; step across the crossing so the
            // bracket can close.
            next = if value > 0.0 {
                x - 0.5 * tol
            } else {
                x + 0.5 * tol
            };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
        }
        x = next;
    }
    lo
}
