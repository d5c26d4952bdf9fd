//! Sign-change scanning and bisection.

use rayon::prelude::*;

use crate::real::Real;

/// Bisection on [lo, hi] given f(lo) with sign opposite to f(hi).
/// Stops when the bracket is below `tol` or stops shrinking.
pub(crate) fn bisect<R: Real, F: Fn(R) -> R>(f: F, mut lo: R, mut hi: R, flo: R, tol: R) -> R {
    let pos = flo > R::zero();
    for _ in 0..300 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = (lo + hi) * R::f(0.5);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == R::zero() {
            return mid;
        }
        if (fm > R::zero()) == pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * R::f(0.5)
}

/// Evaluates `f` on `xs` in parallel; the result order matches `xs`.
pub(crate) fn par_eval<F: Fn(f64) -> f64 + Sync>(xs: &[f64], f: F) -> Vec<f64> {
    xs.par_iter().map(|&x| f(x)).collect()
}

/// First index i with sign(v[i]) != sign(v[i+1]), skipping zeros and NaNs
/// on the left edge.
pub(crate) fn first_sign_change(v: &[f64]) -> Option<usize> {
    v.windows(2)
        .position(|w| w[0].is_finite() && w[1].is_finite() && w[0] != 0.0 && (w[0] > 0.0) != (w[1] > 0.0))
}

/// Uniform grid of `n` points spanning [a, b].
pub(crate) fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * (i as f64) / ((n - 1) as f64))
        .collect()
}
