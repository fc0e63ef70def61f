//! Optimal continuous policy over fading states.
//!
//! The far user picks a communication method ρ(v), a time share α(v) ∈ [0,1],
//! and a power p(v) ≤ P̂ per state, subject to an ergodic near-user rate
//! target R̄ and an average power cap P̄. Both coupling constraints are
//! dualized with multipliers (β, δ); each state then maximizes
//!
//! ```text
//! α · Π_m(p),   Π_m(p) = S_m(p) + β·(R_int(p) − R_off) − δ·p
//! ```
//!
//! over p by one-dimensional search (a uniform grid plus golden-section
//! refinement, split at the semantic-similarity indicator crossing), with
//! α = 1 exactly when Π > 0. The dual is minimized by the central-cut
//! ellipsoid method in two dimensions, and the primal time shares are
//! recovered by an exact two-constraint LP whose optimum leaves at most two
//! states fractional.

use crate::link::{FadingState, PolicyDecision, SystemParams};
use crate::lp::solve_packing_lp;
use crate::schemes::{ModePolicy, PowerPolicy, SchemeId, TimePolicy};
use crate::search::golden_section_max;
use crate::semantic::{similarity, threshold_snr};
use crate::{Error, Result};
use rayon::prelude::*;

/// Configuration of the continuous resource-management problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousConfig {
    /// Ergodic near-user rate target R̄, bits/s/Hz.
    pub r_bar: f64,
    /// Average power cap P̄, Watts.
    pub p_avg: f64,
    /// Peak power cap P̂, Watts.
    pub p_peak: f64,
    /// Points of the uniform power grid on [0, P̂].
    pub power_grid: usize,
    /// Ellipsoid stopping threshold on sqrt(gᵀAg).
    pub ellipsoid_tol: f64,
    pub ellipsoid_max_iters: usize,
}

impl ContinuousConfig {
    pub fn new(r_bar: f64, p_avg: f64, p_peak: f64) -> Result<Self> {
        let cfg = Self {
            r_bar,
            p_avg,
            p_peak,
            power_grid: 1001,
            ellipsoid_tol: 1e-5,
            ellipsoid_max_iters: 500,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_avg > 0.0 && self.p_avg <= self.p_peak) {
            return Err(Error::InvalidParameter(format!(
                "continuous: need 0 < p_avg <= p_peak, got {} and {}",
                self.p_avg, self.p_peak
            )));
        }
        if self.power_grid < 2 {
            return Err(Error::InvalidParameter("continuous: power_grid must be >= 2".into()));
        }
        if !(self.r_bar >= 0.0) {
            return Err(Error::InvalidParameter("continuous: r_bar must be >= 0".into()));
        }
        if !(self.ellipsoid_tol > 0.0) || self.ellipsoid_max_iters == 0 {
            return Err(Error::InvalidParameter("continuous: bad ellipsoid settings".into()));
        }
        Ok(())
    }
}

/// Non-negative multipliers of the rate and average-power constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPoint {
    pub beta: f64,
    pub delta: f64,
}

/// Which per-time rate enters the Lagrangian density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiMode {
    Sem,
    Bit,
}

/// Central-cut ellipsoid over the dual plane.
#[derive(Debug, Clone, Copy)]
pub struct EllipsoidState {
    pub center: [f64; 2],
    /// Symmetric positive-definite shape matrix; the ellipsoid is
    /// {z : (z−center)ᵀ A⁻¹ (z−center) ≤ 1}.
    pub shape: [[f64; 2]; 2],
}

impl EllipsoidState {
    pub fn new(center: [f64; 2], radius: f64) -> Self {
        let r2 = radius * radius;
        Self { center, shape: [[r2, 0.0], [0.0, r2]] }
    }

    /// sqrt(gᵀAg) for a cut direction.
    pub fn cut_norm(&self, g: [f64; 2]) -> f64 {
        let ag = self.mat_vec(g);
        (g[0] * ag[0] + g[1] * ag[1]).max(0.0).sqrt()
    }

    fn mat_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.shape[0][0] * v[0] + self.shape[0][1] * v[1],
            self.shape[1][0] * v[0] + self.shape[1][1] * v[1],
        ]
    }

    /// Central cut keeping the halfspace {z : gᵀ(z − center) ≤ 0}.
    /// Returns false when the cut is numerically degenerate.
    pub fn cut(&mut self, g: [f64; 2]) -> bool {
        let ag = self.mat_vec(g);
        let gag = g[0] * ag[0] + g[1] * ag[1];
        if !(gag > 0.0) || !gag.is_finite() {
            return false;
        }
        let norm = gag.sqrt();
        let agn = [ag[0] / norm, ag[1] / norm];
        // n = 2: center shift 1/(n+1), shape scale n²/(n²−1), rank-1 factor 2/(n+1).
        self.center[0] -= agn[0] / 3.0;
        self.center[1] -= agn[1] / 3.0;
        let scale = 4.0 / 3.0;
        for i in 0..2 {
            for j in 0..2 {
                self.shape[i][j] = scale * (self.shape[i][j] - (2.0 / 3.0) * agn[i] * agn[j]);
            }
        }
        // Keep the matrix exactly symmetric under roundoff.
        let off = 0.5 * (self.shape[0][1] + self.shape[1][0]);
        self.shape[0][1] = off;
        self.shape[1][0] = off;
        true
    }
}

/// Full solver output.
#[derive(Debug, Clone)]
pub struct ContinuousSolution {
    pub decisions: Vec<PolicyDecision>,
    pub duals: DualPoint,
    /// Ergodic far-user semantic rate (the primal objective).
    pub ergodic_s: f64,
    pub ergodic_r: f64,
    pub avg_power: f64,
    /// Dual value g₂(β*, δ*) evaluated with refined per-state maximizers.
    pub dual_value: f64,
    /// dual_value − ergodic_s (non-negative up to roundoff).
    pub dual_gap: f64,
    pub ellipsoid_converged: bool,
    pub ellipsoid_iterations: usize,
    /// Number of states with a strictly fractional time share.
    pub fractional_states: usize,
    /// True when the LP recovery fell back to a non-certified vertex.
    pub lp_fallback: bool,
}

// ---------------------------------------------------------------------------
// Per-state power tables
// ---------------------------------------------------------------------------

/// Candidate powers with precomputed rates, shared by every dual iteration.
#[derive(Debug, Clone)]
pub(crate) struct StateTable {
    pub r_off: f64,
    powers: Vec<f64>,
    s_sem: Vec<f64>,
    s_bit: Vec<f64>,
    /// R_int(p) − R_off ≤ 0.
    dr: Vec<f64>,
    /// Interior indicator crossing, if any, for piece-aware refinement.
    p_cross: Option<f64>,
}

fn interior_cross(st: &FadingState, cfg: &ContinuousConfig, params: &SystemParams) -> Option<f64> {
    let gamma_cross = threshold_snr(&params.semcom.logistic, params.semcom.min_similarity)?;
    if st.far_gain <= 0.0 {
        return None;
    }
    let p_cross = gamma_cross * params.noise_power / st.far_gain;
    (p_cross > 0.0 && p_cross < cfg.p_peak).then_some(p_cross)
}

impl StateTable {
    pub(crate) fn build(
        st: &FadingState,
        cfg: &ContinuousConfig,
        params: &SystemParams,
        power: PowerPolicy,
    ) -> Self {
        let mut powers: Vec<f64> = match power {
            PowerPolicy::OnOff => vec![0.0, cfg.p_peak],
            PowerPolicy::Continuous => {
                let n = cfg.power_grid;
                let step = cfg.p_peak / (n - 1) as f64;
                (0..n)
                    .map(|i| if i == n - 1 { cfg.p_peak } else { step * i as f64 })
                    .collect()
            }
        };
        let p_cross = match power {
            PowerPolicy::OnOff => None,
            PowerPolicy::Continuous => interior_cross(st, cfg, params),
        };
        if let Some(pc) = p_cross {
            // The jump point itself belongs to the valid side; make sure the
            // grid sees it exactly.
            let pos = powers.partition_point(|&p| p < pc);
            if powers.get(pos).map_or(true, |&p| p != pc) {
                powers.insert(pos, pc);
            }
        }

        let r_off = params.rate_off(st.near_gain);
        let sem_scale = params.semcom.rate_scale();
        let bit_scale = params.semcom.info_suts
            / (params.bitcom.bits_per_word * params.semcom.words_per_sentence)
            * params.bitcom.bit_similarity;
        let eps_bar = params.semcom.min_similarity;
        let mut s_sem = Vec::with_capacity(powers.len());
        let mut s_bit = Vec::with_capacity(powers.len());
        let mut dr = Vec::with_capacity(powers.len());
        for &p in &powers {
            let gamma = p * st.far_gain / params.noise_power;
            let eps = similarity(&params.semcom.logistic, gamma);
            s_sem.push(if eps >= eps_bar { sem_scale * eps } else { 0.0 });
            s_bit.push(bit_scale * (1.0 + gamma).log2());
            let r_int = (1.0
                + params.p_near * st.near_gain / (p * st.far_gain + params.noise_power))
                .log2();
            dr.push(r_int - r_off);
        }
        Self { r_off, powers, s_sem, s_bit, dr, p_cross }
    }

    /// Grid argmax of Π_m over the table. Ties keep the smallest power.
    fn grid_max(&self, mode: PiMode, dual: &DualPoint) -> (usize, f64) {
        let s = match mode {
            PiMode::Sem => &self.s_sem,
            PiMode::Bit => &self.s_bit,
        };
        let mut best_i = 0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..self.powers.len() {
            let v = s[i] + dual.beta * self.dr[i] - dual.delta * self.powers[i];
            if v > best {
                best = v;
                best_i = i;
            }
        }
        (best_i, best)
    }

    /// Grid argmax followed by golden-section refinement inside the bracket,
    /// clipped to the smooth piece containing the best grid point.
    fn refined_max(
        &self,
        mode: PiMode,
        st: &FadingState,
        dual: &DualPoint,
        cfg: &ContinuousConfig,
        params: &SystemParams,
    ) -> (f64, f64) {
        let (i, grid_val) = self.grid_max(mode, dual);
        if self.powers.len() <= 2 {
            return (self.powers[i], grid_val);
        }
        let mut lo = if i == 0 { self.powers[0] } else { self.powers[i - 1] };
        let mut hi = if i + 1 == self.powers.len() { self.powers[i] } else { self.powers[i + 1] };
        if mode == PiMode::Sem {
            if let Some(pc) = self.p_cross {
                // Never refine across the indicator jump.
                if self.powers[i] >= pc {
                    lo = lo.max(pc);
                } else {
                    hi = hi.min(pc);
                }
            }
        }
        let f = |p: f64| pi_value(p, mode, st, dual, cfg, params);
        let (gx, gv) = golden_section_max(f, lo, hi);
        if gv > grid_val {
            (gx, gv)
        } else {
            (self.powers[i], grid_val)
        }
    }
}

/// Lagrangian density Π_m(p) = S_m(p) + β·(R_int(p) − R_off) − δ·p.
pub fn pi_value(
    p: f64,
    mode: PiMode,
    st: &FadingState,
    dual: &DualPoint,
    _cfg: &ContinuousConfig,
    params: &SystemParams,
) -> f64 {
    let s = match mode {
        PiMode::Sem => crate::link::far_semcom_rate(p, st, params),
        PiMode::Bit => crate::link::far_bitcom_rate(p, st, params),
    };
    let r_off = params.rate_off(st.near_gain);
    let r_int = (1.0
        + params.p_near * st.near_gain / (p * st.far_gain + params.noise_power))
        .log2();
    s + dual.beta * (r_int - r_off) - dual.delta * p
}

/// Maximize Π_m over [0, P̂]: uniform grid plus golden-section refinement,
/// with the domain split at the similarity-indicator crossing for SemCom.
pub fn maximize_pi(
    mode: PiMode,
    st: &FadingState,
    dual: &DualPoint,
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> (f64, f64) {
    let table = StateTable::build(st, cfg, params, PowerPolicy::Continuous);
    table.refined_max(mode, st, dual, cfg, params)
}

// ---------------------------------------------------------------------------
// Per-state subproblem
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Outcome {
    dec: PolicyDecision,
    /// Winning α·Π value (≥ 0 with the a₀ = 0 convention).
    win: f64,
    /// Contribution to the dual function: win + β·R_off.
    contribution: f64,
    /// Near-user rate under the decision.
    r: f64,
    /// α·p under the decision.
    q: f64,
}

/// Apply the α/ρ selection rules to the two per-mode maximizers. `None`
/// marks a mode excluded by the scheme.
fn select(
    sem: Option<(f64, f64)>,
    bit: Option<(f64, f64)>,
    r_off: f64,
    dual: &DualPoint,
    table: &StateTable,
) -> Outcome {
    // α·Π at the per-mode optimum under the a₀ = 0 rule: max(Π, 0).
    let val_s = sem.map_or(f64::NEG_INFINITY, |(_, pi)| pi.max(0.0));
    let val_b = bit.map_or(f64::NEG_INFINITY, |(_, pi)| pi.max(0.0));
    // Strict comparison: ties resolve to BitCom, matching the on-off solver.
    let use_semcom = val_s > val_b;
    let ((p_star, pi_star), win) =
        if use_semcom { (sem.unwrap(), val_s) } else { (bit.unwrap(), val_b) };
    let alpha = if pi_star > 0.0 { 1.0 } else { 0.0 };
    let dec = PolicyDecision { use_semcom, alpha, power: p_star };
    // dr at p_star is known exactly when p_star sits on the table; refined
    // off-grid powers are patched up by the caller.
    let dr = table_dr(table, p_star);
    let r = r_off + alpha * dr;
    let q = alpha * p_star;
    Outcome { dec, win, contribution: win + dual.beta * r_off, r, q }
}

fn table_dr(table: &StateTable, p: f64) -> f64 {
    match table.powers.binary_search_by(|x| x.partial_cmp(&p).unwrap()) {
        Ok(i) => table.dr[i],
        Err(_) => f64::NAN, // caller recomputes
    }
}

/// Solve the per-state subproblem at fixed duals: per-mode 1-D power search,
/// the a₀ = 0 time-share rule, and the method selection with ties to BitCom.
/// Returns the decision and its contribution to the dual function.
pub fn subproblem_s2(
    st: &FadingState,
    dual: &DualPoint,
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> (PolicyDecision, f64) {
    let table = StateTable::build(st, cfg, params, PowerPolicy::Continuous);
    let sem = table.refined_max(PiMode::Sem, st, dual, cfg, params);
    let bit = table.refined_max(PiMode::Bit, st, dual, cfg, params);
    let out = refined_outcome(&table, st, Some(sem), Some(bit), dual, params);
    (out.dec, out.contribution)
}

/// Outcome with exact r/q at an off-grid refined power.
fn refined_outcome(
    table: &StateTable,
    st: &FadingState,
    sem: Option<(f64, f64)>,
    bit: Option<(f64, f64)>,
    dual: &DualPoint,
    params: &SystemParams,
) -> Outcome {
    let mut out = select(sem, bit, table.r_off, dual, table);
    if out.r.is_nan() {
        let p = out.dec.power;
        let r_int = (1.0
            + params.p_near * st.near_gain / (p * st.far_gain + params.noise_power))
            .log2();
        out.r = table.r_off + out.dec.alpha * (r_int - table.r_off);
        out.q = out.dec.alpha * p;
    }
    out
}

fn table_outcome(table: &StateTable, dual: &DualPoint, mode: ModePolicy) -> Outcome {
    let sem = (mode != ModePolicy::BitComOnly).then(|| {
        let (i, pi) = table.grid_max(PiMode::Sem, dual);
        (table.powers[i], pi)
    });
    let bit = (mode != ModePolicy::SemComOnly).then(|| {
        let (i, pi) = table.grid_max(PiMode::Bit, dual);
        (table.powers[i], pi)
    });
    let mut out = select(sem, bit, table.r_off, dual, table);
    debug_assert!(!out.r.is_nan());
    if out.r.is_nan() {
        out.r = table.r_off;
        out.q = 0.0;
    }
    out
}

// ---------------------------------------------------------------------------
// Dual function and ellipsoid descent
// ---------------------------------------------------------------------------

/// Shared per-state tables for one (states, config, power-policy) triple.
pub(crate) struct Workspace {
    pub tables: Vec<StateTable>,
    pub ceiling: f64,
}

impl Workspace {
    pub(crate) fn new(
        states: &[FadingState],
        cfg: &ContinuousConfig,
        params: &SystemParams,
        power: PowerPolicy,
    ) -> Self {
        let tables: Vec<StateTable> = states
            .par_iter()
            .map(|st| StateTable::build(st, cfg, params, power))
            .collect();
        let ceiling = tables.iter().map(|t| t.r_off).sum::<f64>() / tables.len().max(1) as f64;
        Self { tables, ceiling }
    }

    fn dual_eval(&self, dual: &DualPoint, cfg: &ContinuousConfig, mode: ModePolicy) -> (f64, [f64; 2]) {
        let outs: Vec<(f64, f64, f64)> = self
            .tables
            .par_iter()
            .map(|t| {
                let o = table_outcome(t, dual, mode);
                (o.contribution, o.r, o.q)
            })
            .collect();
        let n = outs.len() as f64;
        let mut sum_c = 0.0;
        let mut sum_r = 0.0;
        let mut sum_q = 0.0;
        for (c, r, q) in &outs {
            sum_c += c;
            sum_r += r;
            sum_q += q;
        }
        let g2 = sum_c / n - dual.beta * cfg.r_bar + dual.delta * cfg.p_avg;
        let grad = [sum_r / n - cfg.r_bar, cfg.p_avg - sum_q / n];
        (g2, grad)
    }
}

/// Dual function g₂(β, δ) and its subgradient, evaluated with refined
/// per-state maximizers.
pub fn dual_function(
    states: &[FadingState],
    dual: &DualPoint,
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> Result<(f64, [f64; 2])> {
    if states.is_empty() {
        return Err(Error::Argument("continuous: need at least one fading state".into()));
    }
    let outs: Vec<(f64, f64, f64)> = states
        .par_iter()
        .map(|st| {
            let table = StateTable::build(st, cfg, params, PowerPolicy::Continuous);
            let sem = table.refined_max(PiMode::Sem, st, dual, cfg, params);
            let bit = table.refined_max(PiMode::Bit, st, dual, cfg, params);
            let o = refined_outcome(&table, st, Some(sem), Some(bit), dual, params);
            (o.contribution, o.r, o.q)
        })
        .collect();
    let n = outs.len() as f64;
    let mut sum_c = 0.0;
    let mut sum_r = 0.0;
    let mut sum_q = 0.0;
    for (c, r, q) in &outs {
        sum_c += c;
        sum_r += r;
        sum_q += q;
    }
    let g2 = sum_c / n - dual.beta * cfg.r_bar + dual.delta * cfg.p_avg;
    let grad = [sum_r / n - cfg.r_bar, cfg.p_avg - sum_q / n];
    Ok((g2, grad))
}

/// Result of the dual descent.
#[derive(Debug, Clone)]
pub struct DualSolve {
    pub duals: DualPoint,
    pub converged: bool,
    pub iterations: usize,
    /// Best dual value seen (table accuracy).
    pub dual_value: f64,
    /// Lowest-value evaluated centers, best first; primal recovery tries each
    /// because marginal states can pick better powers at a neighboring dual.
    pub candidates: Vec<DualPoint>,
}

/// Minimize the dual with the central-cut ellipsoid method, starting from a
/// ball of radius 1e6 around (1, 1) and cutting back into the non-negative
/// orthant whenever a center coordinate goes negative.
pub fn ellipsoid_solve(
    states: &[FadingState],
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> Result<DualSolve> {
    let ws = Workspace::new(states, cfg, params, PowerPolicy::Continuous);
    ellipsoid_core(&ws, cfg, ModePolicy::Opportunistic)
}

pub(crate) fn ellipsoid_core(
    ws: &Workspace,
    cfg: &ContinuousConfig,
    mode: ModePolicy,
) -> Result<DualSolve> {
    if ws.tables.is_empty() {
        return Err(Error::Argument("continuous: need at least one fading state".into()));
    }
    cfg.validate()?;
    if cfg.r_bar > ws.ceiling {
        return Err(Error::Infeasible(format!(
            "continuous: target {} exceeds the all-off ergodic ceiling {}",
            cfg.r_bar, ws.ceiling
        )));
    }

    let mut ell = EllipsoidState::new([1.0, 1.0], 1e6);
    let mut evaluated: Vec<(f64, [f64; 2])> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.ellipsoid_max_iters {
        iterations += 1;
        let cut = if ell.center[0] < 0.0 {
            [-1.0, 0.0]
        } else if ell.center[1] < 0.0 {
            [0.0, -1.0]
        } else {
            let dual = DualPoint { beta: ell.center[0], delta: ell.center[1] };
            let (g2, grad) = ws.dual_eval(&dual, cfg, mode);
            evaluated.push((g2, ell.center));
            if ell.cut_norm(grad) <= cfg.ellipsoid_tol {
                converged = true;
                break;
            }
            grad
        };
        if !ell.cut(cut) {
            // Numerically degenerate ellipsoid; the best center stands.
            converged = !evaluated.is_empty();
            break;
        }
    }

    if evaluated.is_empty() {
        return Err(Error::Infeasible(
            "continuous: ellipsoid never reached the non-negative orthant".into(),
        ));
    }
    evaluated.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (dual_value, center) = evaluated[0];
    let mut candidates: Vec<DualPoint> = evaluated
        .iter()
        .take(16)
        .map(|(_, c)| DualPoint { beta: c[0].max(0.0), delta: c[1].max(0.0) })
        .collect();
    // Small perturbations of the best center sample different tie patterns
    // at the marginal states during recovery.
    let (b0, d0) = (center[0].max(0.0), center[1].max(0.0));
    for (fb, fd) in [(0.98, 1.0), (1.02, 1.0), (1.0, 0.98), (1.0, 1.02)] {
        candidates.push(DualPoint { beta: b0 * fb, delta: d0 * fd });
    }
    Ok(DualSolve {
        duals: DualPoint { beta: center[0].max(0.0), delta: center[1].max(0.0) },
        converged,
        iterations,
        dual_value,
        candidates,
    })
}

// ---------------------------------------------------------------------------
// Primal recovery
// ---------------------------------------------------------------------------

/// Recover the primal policy at fixed duals: (ρ*, p*) from the per-state
/// subproblems, then the time shares from the exact two-constraint LP.
pub fn recover_primal(
    states: &[FadingState],
    duals: &DualPoint,
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> Result<ContinuousSolution> {
    let ws = Workspace::new(states, cfg, params, PowerPolicy::Continuous);
    let scheme = SchemeId::unrestricted();
    let dual_solve = DualSolve {
        duals: *duals,
        converged: true,
        iterations: 0,
        dual_value: f64::NAN,
        candidates: vec![*duals],
    };
    recover_core(states, &ws, &dual_solve, cfg, params, &scheme)
}

/// Recover at every candidate dual center and keep the best feasible primal;
/// the reported duals are the winning center's, so per-state optimality and
/// weak duality hold at the same point.
pub(crate) fn recover_core(
    states: &[FadingState],
    ws: &Workspace,
    dual_solve: &DualSolve,
    cfg: &ContinuousConfig,
    params: &SystemParams,
    scheme: &SchemeId,
) -> Result<ContinuousSolution> {
    let mut best: Option<ContinuousSolution> = None;
    for duals in &dual_solve.candidates {
        let sol = recover_at(states, ws, *duals, cfg, params, scheme)?;
        if best.as_ref().map_or(true, |b| sol.ergodic_s > b.ergodic_s) {
            best = Some(sol);
        }
    }
    let mut sol = best.ok_or_else(|| {
        Error::Argument("continuous: no dual candidates to recover from".into())
    })?;
    sol.ellipsoid_converged = dual_solve.converged;
    sol.ellipsoid_iterations = dual_solve.iterations;
    Ok(sol)
}

fn recover_at(
    states: &[FadingState],
    ws: &Workspace,
    duals: DualPoint,
    cfg: &ContinuousConfig,
    params: &SystemParams,
    scheme: &SchemeId,
) -> Result<ContinuousSolution> {
    let n = states.len();
    if n == 0 {
        return Err(Error::Argument("continuous: need at least one fading state".into()));
    }

    // Fix (ρ*, p*) per state with the refined search at the final duals.
    struct Fixed {
        dec: PolicyDecision,
        w: f64,
        r_int: f64,
        r_off: f64,
        win: f64,
    }
    let fixed: Vec<Fixed> = states
        .par_iter()
        .zip(&ws.tables)
        .map(|(st, table)| {
            let sem = (scheme.mode_policy != ModePolicy::BitComOnly).then(|| match scheme
                .power_policy
            {
                PowerPolicy::Continuous => table.refined_max(PiMode::Sem, st, &duals, cfg, params),
                PowerPolicy::OnOff => {
                    let (i, pi) = table.grid_max(PiMode::Sem, &duals);
                    (table.powers[i], pi)
                }
            });
            let bit = (scheme.mode_policy != ModePolicy::SemComOnly).then(|| match scheme
                .power_policy
            {
                PowerPolicy::Continuous => table.refined_max(PiMode::Bit, st, &duals, cfg, params),
                PowerPolicy::OnOff => {
                    let (i, pi) = table.grid_max(PiMode::Bit, &duals);
                    (table.powers[i], pi)
                }
            });
            let out = refined_outcome(table, st, sem, bit, &duals, params);
            let p = out.dec.power;
            let w = if out.dec.use_semcom {
                crate::link::far_semcom_rate(p, st, params)
            } else {
                crate::link::far_bitcom_rate(p, st, params)
            };
            let r_int = (1.0
                + params.p_near * st.near_gain / (p * st.far_gain + params.noise_power))
                .log2();
            Fixed { dec: out.dec, w, r_int, r_off: table.r_off, win: out.win }
        })
        .collect();

    // LP over the time shares: max Σ w·α subject to
    //   Σ (r_off − r_int)·α ≤ Σ r_off − n·R̄   and   Σ p·α ≤ n·P̄.
    let w: Vec<f64> = fixed.iter().map(|f| f.w).collect();
    let a: Vec<f64> = fixed.iter().map(|f| (f.r_off - f.r_int).max(0.0)).collect();
    let c: Vec<f64> = fixed.iter().map(|f| f.dec.power).collect();
    let sum_r_off: f64 = fixed.iter().map(|f| f.r_off).sum();
    let b_a = sum_r_off - n as f64 * cfg.r_bar;
    if b_a < -1e-9 * (1.0 + sum_r_off.abs()) {
        return Err(Error::Infeasible(format!(
            "continuous: target {} exceeds the all-off ergodic ceiling {}",
            cfg.r_bar,
            sum_r_off / n as f64
        )));
    }
    let b_c = n as f64 * cfg.p_avg;
    let lp = solve_packing_lp(&w, &a, &c, b_a.max(0.0), b_c);

    let mut alpha = lp.alpha;
    if scheme.time_policy == TimePolicy::OnOff {
        // Rounding a fractional share down raises the near-user rate and
        // lowers the power draw, so feasibility is preserved.
        for x in alpha.iter_mut() {
            if *x < 1.0 {
                *x = 0.0;
            }
        }
    }

    let mut decisions = Vec::with_capacity(n);
    let mut sum_s = 0.0;
    let mut sum_r = 0.0;
    let mut sum_q = 0.0;
    let mut sum_win = 0.0;
    for (f, &al) in fixed.iter().zip(&alpha) {
        decisions.push(PolicyDecision { use_semcom: f.dec.use_semcom, alpha: al, power: f.dec.power });
        sum_s += al * f.w;
        sum_r += al * f.r_int + (1.0 - al) * f.r_off;
        sum_q += al * f.dec.power;
        sum_win += f.win + duals.beta * f.r_off;
    }
    let nf = n as f64;
    let ergodic_s = sum_s / nf;
    let dual_value = sum_win / nf - duals.beta * cfg.r_bar + duals.delta * cfg.p_avg;
    let fractional_states =
        alpha.iter().filter(|&&x| x > 1e-12 && x < 1.0 - 1e-12).count();

    Ok(ContinuousSolution {
        decisions,
        duals,
        ergodic_s,
        ergodic_r: sum_r / nf,
        avg_power: sum_q / nf,
        dual_value,
        dual_gap: dual_value - ergodic_s,
        ellipsoid_converged: false,
        ellipsoid_iterations: 0,
        fractional_states,
        lp_fallback: !lp.optimal,
    })
}

/// Full pipeline: ellipsoid dual descent followed by LP primal recovery.
pub fn solve_s2(
    states: &[FadingState],
    cfg: &ContinuousConfig,
    params: &SystemParams,
) -> Result<ContinuousSolution> {
    solve_restricted(states, cfg, params, &SchemeId::unrestricted())
}

/// Same pipeline with the method/power/time feasible set restricted.
pub fn solve_restricted(
    states: &[FadingState],
    cfg: &ContinuousConfig,
    params: &SystemParams,
    scheme: &SchemeId,
) -> Result<ContinuousSolution> {
    let ws = Workspace::new(states, cfg, params, scheme.power_policy);
    let dual_solve = ellipsoid_core(&ws, cfg, scheme.mode_policy)?;
    recover_core(states, &ws, &dual_solve, cfg, params, scheme)
}
