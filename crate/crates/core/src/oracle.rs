//! Desk-scale brute-force oracle.
//!
//! Independent certification path for the fading-channel solvers: every state
//! gets an exhaustively enumerated quantized choice set (method × power level
//! × time-share level), and instead of exhausting the exponential joint
//! space, a dense grid of multiplier values is scanned. Each grid point
//! yields (a) a dual bound on the optimum and (b) a primal candidate from the
//! per-state maximizers, repaired by small exchange moves (one- and two-state
//! overrides) so near-tight constraints can be met. The oracle reports the
//! best feasible primal and the best dual bound; the production solvers must
//! land between them.

use crate::continuous::ContinuousConfig;
use crate::link::{FadingState, PolicyDecision, SystemParams};
use crate::onoff::OnOffConfig;
use crate::{Error, Result};

/// Quantization of the oracle's per-state choice set and dual grids.
#[derive(Debug, Clone, Copy)]
pub struct QuantSpec {
    /// Power levels on [0, P̂] (or {0, P₀} structure for the on-off problem).
    pub power_levels: usize,
    /// Time-share levels on [0, 1].
    pub alpha_levels: usize,
    /// Points per multiplier axis (zero is always included).
    pub dual_grid: usize,
}

impl Default for QuantSpec {
    fn default() -> Self {
        Self { power_levels: 21, alpha_levels: 11, dual_grid: 48 }
    }
}

/// Which solver the oracle certifies.
#[derive(Debug, Clone, Copy)]
pub enum OracleProblem<'a> {
    OnOff(&'a OnOffConfig),
    Continuous(&'a ContinuousConfig),
}

#[derive(Debug, Clone)]
pub struct OracleReport {
    /// Best feasible quantized objective; meaningful only if `feasible_found`.
    pub best_primal: f64,
    pub best_policy: Vec<PolicyDecision>,
    /// Smallest dual bound over the scanned multiplier grid; an upper bound
    /// on the quantized optimum.
    pub best_dual_bound: f64,
    pub feasible_found: bool,
}

/// One quantized per-state choice with its exact metric contributions.
#[derive(Debug, Clone, Copy)]
struct Choice {
    s: f64,
    r: f64,
    q: f64,
    dec: PolicyDecision,
}

const FEAS_EPS: f64 = 1e-9;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(0.0);
    if n == 0 {
        return v;
    }
    let (ll, lh) = (lo.ln(), hi.ln());
    for i in 0..n {
        let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        v.push((ll + t * (lh - ll)).exp());
    }
    v
}

/// Scan engine shared by both scenarios. `duals` enumerates multiplier
/// vectors, `targets`/`budgets` describe the ≥/≤ constraints.
struct Scan<'a> {
    choices: &'a [Vec<Choice>],
    r_target: f64,
    q_budget: Option<f64>,
}

impl<'a> Scan<'a> {
    fn feasible(&self, mean_r: f64, mean_q: f64) -> bool {
        mean_r >= self.r_target - FEAS_EPS * (1.0 + self.r_target.abs())
            && self
                .q_budget
                .map_or(true, |b| mean_q <= b + FEAS_EPS * (1.0 + b.abs()))
    }

    /// Per-state argmax of s + β·r − δ·q, plus the runner-up margin used to
    /// rank how contested each state's choice is.
    fn argmax(&self, beta: f64, delta: f64) -> (Vec<usize>, Vec<f64>) {
        let mut idx = Vec::with_capacity(self.choices.len());
        let mut margins = Vec::with_capacity(self.choices.len());
        for per_state in self.choices {
            let mut best = f64::NEG_INFINITY;
            let mut second = f64::NEG_INFINITY;
            let mut best_i = 0;
            for (i, ch) in per_state.iter().enumerate() {
                let v = ch.s + beta * ch.r - delta * ch.q;
                if v > best {
                    second = best;
                    best = v;
                    best_i = i;
                } else if v > second {
                    second = v;
                }
            }
            idx.push(best_i);
            margins.push(best - second);
        }
        (idx, margins)
    }

    fn dual_value(&self, beta: f64, delta: f64, idx: &[usize], r_target: f64, q_budget: f64) -> f64 {
        let (mean_s, mean_r, mean_q) = self.sums(idx);
        mean_s + beta * mean_r - delta * mean_q - beta * r_target + delta * q_budget
    }

    fn sums(&self, idx: &[usize]) -> (f64, f64, f64) {
        let n = idx.len() as f64;
        let mut s = 0.0;
        let mut r = 0.0;
        let mut q = 0.0;
        for (per_state, &i) in self.choices.iter().zip(idx) {
            s += per_state[i].s;
            r += per_state[i].r;
            q += per_state[i].q;
        }
        (s / n, r / n, q / n)
    }
}

fn run_scan(
    scan: &Scan,
    dual_points: &[(f64, f64)],
    r_target: f64,
    q_budget: Option<f64>,
) -> (Option<(f64, Vec<usize>)>, f64) {
    let n = scan.choices.len() as f64;
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut best_dual = f64::INFINITY;
    // Dual points worth the richer two-state repair pass.
    let mut polish: Vec<(f64, f64)> = Vec::new();

    let consider =
        |best: &mut Option<(f64, Vec<usize>)>, value: f64, idx: Vec<usize>| {
            if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
                *best = Some((value, idx));
            }
        };

    for &(beta, delta) in dual_points {
        let (idx, _) = scan.argmax(beta, delta);
        let (mean_s, mean_r, mean_q) = scan.sums(&idx);
        let dual_val =
            scan.dual_value(beta, delta, &idx, r_target, q_budget.unwrap_or(0.0));
        if dual_val < best_dual {
            best_dual = dual_val;
            polish.push((beta, delta));
        }
        if scan.feasible(mean_r, mean_q) {
            consider(&mut best, mean_s, idx.clone());
        }
        // One-state override: move a single state to any of its choices.
        let mut improved = false;
        for (v, per_state) in scan.choices.iter().enumerate() {
            let base = per_state[idx[v]];
            for (ci, ch) in per_state.iter().enumerate() {
                let s = mean_s + (ch.s - base.s) / n;
                let r = mean_r + (ch.r - base.r) / n;
                let q = mean_q + (ch.q - base.q) / n;
                if scan.feasible(r, q)
                    && best.as_ref().map_or(true, |(bv, _)| s > *bv)
                {
                    let mut adj = idx.clone();
                    adj[v] = ci;
                    consider(&mut best, s, adj);
                    improved = true;
                }
            }
        }
        if improved {
            polish.push((beta, delta));
        }
    }

    // Two-state repair at the most promising dual points: jointly override
    // the most contested states so a pair of near-tight constraints can be
    // met at once.
    let keep = polish.len().saturating_sub(8);
    for &(beta, delta) in &polish[keep..] {
        let (idx, margins) = scan.argmax(beta, delta);
        let (mean_s, mean_r, mean_q) = scan.sums(&idx);
        let mut order: Vec<usize> = (0..scan.choices.len()).collect();
        order.sort_by(|&a, &b| margins[a].partial_cmp(&margins[b]).unwrap());
        let marginal: Vec<usize> = order.into_iter().take(4).collect();
        for (mi, &v1) in marginal.iter().enumerate() {
            for &v2 in &marginal[mi + 1..] {
                let b1 = scan.choices[v1][idx[v1]];
                let b2 = scan.choices[v2][idx[v2]];
                for (ci1, c1) in scan.choices[v1].iter().enumerate() {
                    let s1 = mean_s + (c1.s - b1.s) / n;
                    let r1 = mean_r + (c1.r - b1.r) / n;
                    let q1 = mean_q + (c1.q - b1.q) / n;
                    for (ci2, c2) in scan.choices[v2].iter().enumerate() {
                        let s = s1 + (c2.s - b2.s) / n;
                        let r = r1 + (c2.r - b2.r) / n;
                        let q = q1 + (c2.q - b2.q) / n;
                        if scan.feasible(r, q)
                            && best.as_ref().map_or(true, |(bv, _)| s > *bv)
                        {
                            let mut adj = idx.clone();
                            adj[v1] = ci1;
                            adj[v2] = ci2;
                            consider(&mut best, s, adj);
                        }
                    }
                }
            }
        }
    }

    (best, best_dual)
}

/// Certify a desk-scale instance by exhaustive quantized search over a dense
/// multiplier grid. Instances are capped at 32 states.
pub fn brute_force_oracle(
    states: &[FadingState],
    quant: &QuantSpec,
    problem: &OracleProblem,
    params: &SystemParams,
) -> Result<OracleReport> {
    if states.is_empty() || states.len() > 32 {
        return Err(Error::Argument(format!(
            "oracle: instance must have 1..=32 states, got {}",
            states.len()
        )));
    }
    if quant.power_levels < 2 || quant.alpha_levels < 2 || quant.dual_grid < 2 {
        return Err(Error::Argument("oracle: quantization grids must be >= 2".into()));
    }

    match problem {
        OracleProblem::OnOff(cfg) => oracle_onoff(states, quant, cfg, params),
        OracleProblem::Continuous(cfg) => oracle_continuous(states, quant, cfg, params),
    }
}

fn oracle_onoff(
    states: &[FadingState],
    quant: &QuantSpec,
    cfg: &OnOffConfig,
    params: &SystemParams,
) -> Result<OracleReport> {
    let choices: Vec<Vec<Choice>> = states
        .iter()
        .map(|st| {
            let r_on = (1.0
                + params.p_near * st.near_gain
                    / (cfg.p0 * st.far_gain + params.noise_power))
                .log2();
            let r_off = params.rate_off(st.near_gain);
            vec![
                Choice { s: 0.0, r: r_off, q: 0.0, dec: PolicyDecision::OFF },
                Choice {
                    s: crate::link::far_bitcom_rate(cfg.p0, st, params),
                    r: r_on,
                    q: cfg.p0,
                    dec: PolicyDecision { use_semcom: false, alpha: 1.0, power: cfg.p0 },
                },
                Choice {
                    s: crate::link::far_semcom_rate(cfg.p0, st, params),
                    r: r_on,
                    q: cfg.p0,
                    dec: PolicyDecision { use_semcom: true, alpha: 1.0, power: cfg.p0 },
                },
            ]
        })
        .collect();

    let scan = Scan { choices: &choices, r_target: cfg.r_bar, q_budget: None };
    let lambdas: Vec<(f64, f64)> = log_grid(1e-6, 1e3, quant.dual_grid * quant.dual_grid - 1)
        .into_iter()
        .map(|l| (l, 0.0))
        .collect();
    let (best, best_dual) = run_scan(&scan, &lambdas, cfg.r_bar, None);
    Ok(assemble(best, best_dual, &choices))
}

fn oracle_continuous(
    states: &[FadingState],
    quant: &QuantSpec,
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> Result<OracleReport> {
    let p_step = cfg.p_peak / (quant.power_levels - 1) as f64;
    let a_step = 1.0 / (quant.alpha_levels - 1) as f64;
    let choices: Vec<Vec<Choice>> = states
        .iter()
        .map(|st| {
            let r_off = params.rate_off(st.near_gain);
            let mut per_state = Vec::with_capacity(2 * quant.power_levels * quant.alpha_levels);
            for pi in 0..quant.power_levels {
                let p = if pi == quant.power_levels - 1 { cfg.p_peak } else { p_step * pi as f64 };
                let r_int = (1.0
                    + params.p_near * st.near_gain / (p * st.far_gain + params.noise_power))
                    .log2();
                let s_sem = crate::link::far_semcom_rate(p, st, params);
                let s_bit = crate::link::far_bitcom_rate(p, st, params);
                for ai in 0..quant.alpha_levels {
                    let alpha =
                        if ai == quant.alpha_levels - 1 { 1.0 } else { a_step * ai as f64 };
                    let r = alpha * r_int + (1.0 - alpha) * r_off;
                    let q = alpha * p;
                    per_state.push(Choice {
                        s: alpha * s_sem,
                        r,
                        q,
                        dec: PolicyDecision { use_semcom: true, alpha, power: p },
                    });
                    per_state.push(Choice {
                        s: alpha * s_bit,
                        r,
                        q,
                        dec: PolicyDecision { use_semcom: false, alpha, power: p },
                    });
                }
            }
            per_state
        })
        .collect();

    let scan = Scan { choices: &choices, r_target: cfg.r_bar, q_budget: Some(cfg.p_avg) };
    let axis = log_grid(1e-6, 1e3, quant.dual_grid - 1);
    let mut duals = Vec::with_capacity(axis.len() * axis.len());
    for &b in &axis {
        for &d in &axis {
            duals.push((b, d));
        }
    }
    let (best, best_dual) = run_scan(&scan, &duals, cfg.r_bar, Some(cfg.p_avg));
    Ok(assemble(best, best_dual, &choices))
}

fn assemble(
    best: Option<(f64, Vec<usize>)>,
    best_dual: f64,
    choices: &[Vec<Choice>],
) -> OracleReport {
    match best {
        Some((value, idx)) => OracleReport {
            best_primal: value,
            best_policy: choices.iter().zip(&idx).map(|(cs, &i)| cs[i].dec).collect(),
            best_dual_bound: best_dual,
            feasible_found: true,
        },
        None => OracleReport {
            best_primal: f64::NEG_INFINITY,
            best_policy: Vec::new(),
            best_dual_bound: best_dual,
            feasible_found: false,
        },
    }
}
