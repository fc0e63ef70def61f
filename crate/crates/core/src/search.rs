//! One-dimensional maximization: uniform grid scan plus golden-section
//! refinement of the best bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Returns `(x_max, f_max)`. Assumes nothing about unimodality; callers
/// bracket the global grid maximum first, so the refinement only has to win
/// locally.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    if b < a {
        std::mem::swap(&mut a, &mut b);
    }
    let tol = 1e-12 * (1.0 + b.abs());
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2usize;
    while evals < 90 && (b - a) > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximize `f` on `[lo, hi]` by an `n`-point uniform grid followed by
/// golden-section refinement inside the bracket around the best grid point.
/// Endpoints are always evaluated.
pub fn grid_refine_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    debug_assert!(n >= 2);
    if !(hi > lo) {
        return (lo, f(lo));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut best_i = 0usize;
    let mut best_x = lo;
    let mut best_v = f(lo);
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + step * i as f64 };
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    let bl = if best_i == 0 { lo } else { lo + step * (best_i - 1) as f64 };
    let bh = if best_i >= n - 2 { hi } else { lo + step * (best_i + 1) as f64 };
    let (gx, gv) = golden_section_max(&f, bl, bh);
    if gv > best_v {
        (gx, gv)
    } else {
        (best_x, best_v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_a_parabola_peak() {
        // A quadratic peak is flat to f64 within ~sqrt(ulp) of the maximizer,
        // so position accuracy saturates around 1e-8.
        let (x, v) = golden_section_max(|x| -(x - 0.37).powi(2) + 2.0, 0.0, 1.0);
        assert!((x - 0.37).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn grid_refine_handles_boundary_maxima() {
        let (x, v) = grid_refine_max(|x| 3.0 * x, 0.0, 2.0, 11);
        assert!((x - 2.0).abs() < 1e-12);
        assert!((v - 6.0).abs() < 1e-12);
        let (x0, _) = grid_refine_max(|x| -x, 0.0, 2.0, 11);
        assert!(x0.abs() < 1e-9);
    }

    #[test]
    fn grid_refine_beats_the_bare_grid_on_a_narrow_peak() {
        let f = |x: f64| 1.0 / (1.0 + 1e4 * (x - 0.314_159).powi(2));
        let (x, v) = grid_refine_max(f, 0.0, 1.0, 101);
        assert!((x - 0.314_159).abs() < 1e-6);
        assert!(v > 0.999_999);
    }

    #[test]
    fn degenerate_interval_returns_the_point() {
        let (x, v) = grid_refine_max(|x| x * x, 1.5, 1.5, 11);
        assert_eq!(x, 1.5);
        assert_eq!(v, 2.25);
    }
}
