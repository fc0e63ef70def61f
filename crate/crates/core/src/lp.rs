//! Exact solver for the two-constraint packing LP that arises in the primal
//! recovery step:
//!
//! ```text
//! max  Σ w_v·α_v    s.t.  Σ a_v·α_v ≤ B_a,  Σ c_v·α_v ≤ B_c,  0 ≤ α_v ≤ 1
//! ```
//!
//! with all data non-negative. With two coupling constraints an optimal
//! vertex has at most two strictly fractional variables. The solver first
//! tries the unconstrained and single-constraint (fractional knapsack)
//! optima; when both constraints bind it runs a dual-price search — bisection
//! on the price of the second constraint with an exact inner knapsack — and
//! finishes with an exact vertex enumeration over the small set of variables
//! whose assignment is still ambiguous.

#[derive(Debug, Clone)]
pub struct PackingSolution {
    pub alpha: Vec<f64>,
    pub value: f64,
    /// Number of strictly fractional coordinates.
    pub fractional: usize,
    /// False only when the degenerate fallback path was taken; the returned
    /// point is still feasible.
    pub optimal: bool,
}

const EPS: f64 = 1e-12;

fn usage(alpha: &[f64], cost: &[f64]) -> f64 {
    alpha.iter().zip(cost).map(|(x, c)| x * c).sum()
}

fn objective(alpha: &[f64], w: &[f64]) -> f64 {
    alpha.iter().zip(w).map(|(x, v)| x * v).sum()
}

fn count_fractional(alpha: &[f64]) -> usize {
    alpha.iter().filter(|&&x| x > EPS && x < 1.0 - EPS).count()
}

/// Greedy fractional knapsack: maximize Σ w·α subject to Σ cost·α ≤ budget,
/// 0 ≤ α ≤ 1. Only items with positive weight participate. Deterministic
/// ratio ordering (ties by index).
fn fractional_knapsack(w: &[f64], cost: &[f64], budget: f64) -> Vec<f64> {
    let n = w.len();
    let mut alpha = vec![0.0; n];
    let mut remaining = budget.max(0.0);
    let mut order: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
    // Free items first (cost 0), then by value density.
    order.sort_by(|&i, &j| {
        let ri = if cost[i] > 0.0 { w[i] / cost[i] } else { f64::INFINITY };
        let rj = if cost[j] > 0.0 { w[j] / cost[j] } else { f64::INFINITY };
        rj.partial_cmp(&ri).unwrap().then(i.cmp(&j))
    });
    for i in order {
        if cost[i] <= 0.0 {
            alpha[i] = 1.0;
        } else if cost[i] <= remaining {
            alpha[i] = 1.0;
            remaining -= cost[i];
        } else if remaining > 0.0 {
            alpha[i] = remaining / cost[i];
            remaining = 0.0;
        } else {
            break;
        }
    }
    alpha
}

/// Exact vertex enumeration on a small residual problem: every variable is at
/// a bound except at most two fractional ones. Returns the best feasible
/// assignment, or `None` when `idx` is too large to enumerate.
fn enumerate_small(
    idx: &[usize],
    w: &[f64],
    a: &[f64],
    c: &[f64],
    b_a: f64,
    b_c: f64,
) -> Option<Vec<f64>> {
    let k = idx.len();
    if k > 14 {
        return None;
    }
    let tol_a = EPS * (1.0 + b_a.abs());
    let tol_c = EPS * (1.0 + b_c.abs());
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |alpha: Vec<f64>| {
        if alpha.iter().any(|&x| !(-EPS..=1.0 + EPS).contains(&x)) {
            return;
        }
        let ua: f64 = idx.iter().zip(&alpha).map(|(&i, x)| a[i] * x).sum();
        let uc: f64 = idx.iter().zip(&alpha).map(|(&i, x)| c[i] * x).sum();
        if ua > b_a + tol_a || uc > b_c + tol_c {
            return;
        }
        let val: f64 = idx.iter().zip(&alpha).map(|(&i, x)| w[i] * x).sum();
        if best.as_ref().map_or(true, |(bv, _)| val > *bv) {
            best = Some((val, alpha));
        }
    };

    let patterns = 1usize << k;
    for bits in 0..patterns {
        let base: Vec<f64> =
            (0..k).map(|t| if bits >> t & 1 == 1 { 1.0 } else { 0.0 }).collect();
        // All at bounds.
        consider(base.clone());
        // One fractional coordinate, tight in either constraint.
        for t in 0..k {
            if bits >> t & 1 == 1 {
                continue; // fractional slots are encoded as 0 in `bits`
            }
            let rest_a: f64 = (0..k)
                .filter(|&u| u != t)
                .map(|u| a[idx[u]] * base[u])
                .sum();
            let rest_c: f64 = (0..k)
                .filter(|&u| u != t)
                .map(|u| c[idx[u]] * base[u])
                .sum();
            if a[idx[t]] > EPS {
                let mut v = base.clone();
                v[t] = ((b_a - rest_a) / a[idx[t]]).clamp(0.0, 1.0);
                consider(v);
            }
            if c[idx[t]] > EPS {
                let mut v = base.clone();
                v[t] = ((b_c - rest_c) / c[idx[t]]).clamp(0.0, 1.0);
                consider(v);
            }
            // Two fractional coordinates with both constraints tight.
            for u in t + 1..k {
                if bits >> u & 1 == 1 {
                    continue;
                }
                let (i, j) = (idx[t], idx[u]);
                let rest_a2 = rest_a - a[j] * base[u];
                let rest_c2 = rest_c - c[j] * base[u];
                let det = a[i] * c[j] - a[j] * c[i];
                if det.abs() < 1e-30 {
                    continue;
                }
                let ra = b_a - rest_a2;
                let rc = b_c - rest_c2;
                let xi = (ra * c[j] - a[j] * rc) / det;
                let xj = (a[i] * rc - ra * c[i]) / det;
                let mut v = base.clone();
                v[t] = xi;
                v[u] = xj;
                consider(v);
            }
        }
    }
    best.map(|(_, alpha)| alpha)
}

/// Solve the packing LP. `w`, `a`, `c` must be non-negative; budgets are
/// clamped at zero.
pub fn solve_packing_lp(w: &[f64], a: &[f64], c: &[f64], b_a: f64, b_c: f64) -> PackingSolution {
    let n = w.len();
    debug_assert_eq!(a.len(), n);
    debug_assert_eq!(c.len(), n);
    let b_a = b_a.max(0.0);
    let b_c = b_c.max(0.0);
    let tol_a = EPS * (1.0 + b_a);
    let tol_c = EPS * (1.0 + b_c);
    let feasible =
        |alpha: &[f64]| usage(alpha, a) <= b_a + tol_a && usage(alpha, c) <= b_c + tol_c;

    let done = |alpha: Vec<f64>, optimal: bool| {
        let value = objective(&alpha, w);
        let fractional = count_fractional(&alpha);
        PackingSolution { alpha, value, fractional, optimal }
    };

    // Unconstrained optimum.
    let all_in: Vec<f64> = w.iter().map(|&wi| if wi > 0.0 { 1.0 } else { 0.0 }).collect();
    if feasible(&all_in) {
        return done(all_in, true);
    }

    // Single-constraint optima.
    let by_a = fractional_knapsack(w, a, b_a);
    if feasible(&by_a) {
        return done(by_a, true);
    }
    let by_c = fractional_knapsack(w, c, b_c);
    if feasible(&by_c) {
        return done(by_c, true);
    }

    // Both constraints bind: bisect the price y on the c-constraint. The
    // inner problem prices a exactly, so c-usage is non-increasing in y.
    let inner = |y: f64| -> Vec<f64> {
        let w_red: Vec<f64> = w.iter().zip(c).map(|(&wi, &ci)| wi - y * ci).collect();
        fractional_knapsack(&w_red, a, b_a)
    };
    let mut y_lo = 0.0;
    let mut y_hi = 1.0;
    let y_cap = w
        .iter()
        .zip(c)
        .filter(|(_, &ci)| ci > 0.0)
        .map(|(&wi, &ci)| wi / ci)
        .fold(0.0f64, f64::max)
        + 1.0;
    let mut sol_hi = inner(y_hi);
    while usage(&sol_hi, c) > b_c + tol_c {
        y_lo = y_hi;
        y_hi *= 2.0;
        sol_hi = inner(y_hi);
        if y_hi > 4.0 * y_cap {
            break;
        }
    }
    let mut sol_lo = inner(y_lo);
    for _ in 0..200 {
        if y_hi - y_lo <= 1e-14 * y_hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (y_lo + y_hi);
        let sol_mid = inner(mid);
        if usage(&sol_mid, c) > b_c + tol_c {
            y_lo = mid;
            sol_lo = sol_mid;
        } else {
            y_hi = mid;
            sol_hi = sol_mid;
        }
    }

    // The hi-side solution respects both budgets; refine the handful of
    // coordinates where the bracket solutions still disagree.
    let mut base = sol_hi.clone();
    if !feasible(&base) {
        // c-infeasible because even y → ∞ keeps free items; those use no c
        // budget, so this only happens with degenerate data.
        base = vec![0.0; n];
    }
    let mut ambiguous: Vec<usize> = (0..n)
        .filter(|&i| {
            let fr_hi = base[i] > EPS && base[i] < 1.0 - EPS;
            let fr_lo = sol_lo[i] > EPS && sol_lo[i] < 1.0 - EPS;
            fr_hi || fr_lo || (base[i] - sol_lo[i]).abs() > EPS
        })
        .collect();
    if ambiguous.len() > 14 {
        // Keep the largest-weight ambiguous coordinates; the rest stay at
        // their hi-side assignment.
        ambiguous.sort_by(|&i, &j| w[j].partial_cmp(&w[i]).unwrap().then(i.cmp(&j)));
        ambiguous.truncate(14);
    }
    let fixed_a: f64 = (0..n)
        .filter(|i| !ambiguous.contains(i))
        .map(|i| base[i] * a[i])
        .sum();
    let fixed_c: f64 = (0..n)
        .filter(|i| !ambiguous.contains(i))
        .map(|i| base[i] * c[i])
        .sum();
    if let Some(adj) =
        enumerate_small(&ambiguous, w, a, c, b_a - fixed_a, b_c - fixed_c)
    {
        let mut alpha = base.clone();
        for (slot, &i) in ambiguous.iter().enumerate() {
            alpha[i] = adj[slot].clamp(0.0, 1.0);
        }
        if feasible(&alpha) && objective(&alpha, w) >= objective(&base, w) {
            return done(alpha, true);
        }
    }
    done(base, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent reference: enumerate every vertex of the feasible polytope
    /// (all 0/1 patterns with up to two fractional coordinates). Exponential,
    /// test-only.
    fn brute_force(w: &[f64], a: &[f64], c: &[f64], b_a: f64, b_c: f64) -> f64 {
        let n = w.len();
        let idx: Vec<usize> = (0..n).collect();
        let sol = enumerate_small(&idx, w, a, c, b_a, b_c).expect("small instance");
        idx.iter().zip(&sol).map(|(&i, x)| w[i] * x).sum()
    }

    #[test]
    fn slack_budgets_take_everything() {
        let w = [1.0, 2.0, 0.0];
        let a = [1.0, 1.0, 1.0];
        let c = [1.0, 1.0, 1.0];
        let sol = solve_packing_lp(&w, &a, &c, 10.0, 10.0);
        assert_eq!(sol.alpha, vec![1.0, 1.0, 0.0]);
        assert_eq!(sol.fractional, 0);
        assert!(sol.optimal);
    }

    #[test]
    fn single_binding_constraint_is_a_knapsack() {
        let w = [3.0, 2.0, 1.0];
        let a = [1.0, 1.0, 1.0];
        let c = [0.0, 0.0, 0.0];
        let sol = solve_packing_lp(&w, &a, &c, 1.5, 100.0);
        assert!((sol.value - 4.0).abs() < 1e-12); // 3 + 0.5·2
        assert_eq!(sol.fractional, 1);
    }

    #[test]
    fn zero_budget_forces_all_off() {
        let w = [1.0, 1.0];
        let a = [1.0, 2.0];
        let c = [1.0, 1.0];
        let sol = solve_packing_lp(&w, &a, &c, 0.0, 5.0);
        assert_eq!(sol.alpha, vec![0.0, 0.0]);
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn both_constraints_binding_small_case() {
        // Item 0 is a-heavy, item 1 is c-heavy, item 2 balanced.
        let w = [2.0, 2.0, 2.0];
        let a = [2.0, 0.1, 1.0];
        let c = [0.1, 2.0, 1.0];
        let b_a = 1.5;
        let b_c = 1.5;
        let sol = solve_packing_lp(&w, &a, &c, b_a, b_c);
        let reference = brute_force(&w, &a, &c, b_a, b_c);
        assert!((sol.value - reference).abs() < 1e-9, "{} vs {reference}", sol.value);
        assert!(sol.fractional <= 2);
    }

    #[test]
    fn random_instances_match_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for case in 0..300 {
            let n = rng.gen_range(1..=9);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let b_a = rng.gen_range(0.0..1.5 * n as f64);
            let b_c = rng.gen_range(0.0..1.5 * n as f64);
            let sol = solve_packing_lp(&w, &a, &c, b_a, b_c);
            let reference = brute_force(&w, &a, &c, b_a, b_c);
            assert!(
                sol.value >= reference - 1e-7 * (1.0 + reference.abs()),
                "case {case}: solver {} below reference {reference}",
                sol.value
            );
            assert!(usage(&sol.alpha, &a) <= b_a + 1e-9);
            assert!(usage(&sol.alpha, &c) <= b_c + 1e-9);
            assert!(sol.fractional <= 2, "case {case}: {} fractional", sol.fractional);
        }
    }

    #[test]
    fn lattice_search_never_beats_the_solver() {
        // A second independent reference: dense lattice enumeration of the
        // box, feasibility-filtered. It underestimates the LP optimum, so
        // the solver must come out at least as high.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for case in 0..40 {
            let n = rng.gen_range(1..=4);
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..5.0)).collect();
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
            let b_a = rng.gen_range(0.0..1.2 * n as f64);
            let b_c = rng.gen_range(0.0..1.2 * n as f64);
            let sol = solve_packing_lp(&w, &a, &c, b_a, b_c);

            let levels = 21;
            let mut best = 0.0f64;
            let mut idx = vec![0usize; n];
            loop {
                let alpha: Vec<f64> =
                    idx.iter().map(|&i| i as f64 / (levels - 1) as f64).collect();
                if usage(&alpha, &a) <= b_a && usage(&alpha, &c) <= b_c {
                    best = best.max(objective(&alpha, &w));
                }
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < levels {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
            assert!(
                sol.value >= best - 1e-9,
                "case {case}: solver {} below lattice {best}",
                sol.value
            );
        }
    }

    #[test]
    fn larger_instances_stay_feasible_with_tiny_fractional_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 200;
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
            let b_a = rng.gen_range(5.0..40.0);
            let b_c = rng.gen_range(5.0..40.0);
            let sol = solve_packing_lp(&w, &a, &c, b_a, b_c);
            assert!(usage(&sol.alpha, &a) <= b_a + 1e-9);
            assert!(usage(&sol.alpha, &c) <= b_c + 1e-9);
            assert!(sol.fractional <= 2);
            assert!(sol.optimal);
        }
    }
}
