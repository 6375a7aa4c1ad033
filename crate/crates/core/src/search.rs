//! One-dimensional search: uniform grid scan plus golden-section refinement.

use crate::par;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
/// Returns the abscissa and value once the bracket is narrower than `tol`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // bracket shrinks by 0.618 per pass; 200 passes is far below f64 resolution
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    // the midpoint can be marginally worse than an interior probe
    [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((x, fx), |b, c| if c.1 < b.1 { c } else { b })
}

/// Minimizes `f` over the periodic interval (x0, x0 + period] by scanning `n`
/// uniform points and refining the best one by golden section within one
/// grid spacing either side.
pub fn periodic_grid_min<F>(f: F, x0: f64, period: f64, n: usize, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let step = period / n as f64;
    let at = |i: usize| x0 + step * (i + 1) as f64;
    let (best, _) = par::argmin_indexed(n, |i| f(at(i)));
    let centre = at(best);
    golden_section_min(&f, centre - step, centre + step, tol)
}
