//! Scalar minimization helper: golden-section search on a bracketing
//! interval. Sufficient for the smooth unimodal objectives in this crate
//! (Chernoff overlap in s, post-amplifier signal occupation in the gain).

/// Golden-section minimum of `f` on [lo, hi].
///
/// Shrinks the bracket until its width drops below
/// `tol * (1 + |lo| + |hi|)`, then returns the best sampled point.
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    debug_assert!(hi >= lo);
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let width_tol = tol * (1.0 + lo.abs() + hi.abs());
    // Each step shrinks the bracket by 1/phi; 200 iterations is far past
    // f64 resolution for any interval this crate searches.
    for _ in 0..200 {
        if (b - a) <= width_tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
