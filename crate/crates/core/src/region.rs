//! Semantic-versus-bit rate-region boundary for the static channel.
//!
//! For a target near-user bit rate R̄ the boundary point maximizes the far
//! user's (effective or equivalent) semantic rate over the transmit power and
//! time share, subject to the near-user rate constraint, by exhaustive grid
//! search. Sweeping R̄ from 0 to the interference-free ceiling traces the
//! whole boundary.

use crate::link::{far_bitcom_rate, far_semcom_rate, FadingState, SystemParams};
use crate::{Error, Result};
use rayon::prelude::*;

/// Which objective the boundary maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionObjective {
    /// Effective semantic rate of a SemCom far user.
    SemCom,
    /// Equivalent semantic rate of a BitCom far user (baseline).
    BitComEquivalent,
}

impl RegionObjective {
    pub fn name(&self) -> &'static str {
        match self {
            RegionObjective::SemCom => "semcom",
            RegionObjective::BitComEquivalent => "bitcom_equivalent",
        }
    }
}

/// Search discretization and power budget for the boundary problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    /// Far-user maximum transmit power P_f^max, Watts.
    pub p_f_max: f64,
    /// Grid points in p_f ∈ [0, P_f^max].
    pub p_grid: usize,
    /// Grid points in α_f ∈ [0, 1].
    pub alpha_grid: usize,
    /// Number of R̄ samples on [0, ceiling] for a sweep.
    pub r_sweep: usize,
    pub objective: RegionObjective,
}

impl RegionSpec {
    pub fn new(
        p_f_max: f64,
        p_grid: usize,
        alpha_grid: usize,
        r_sweep: usize,
        objective: RegionObjective,
    ) -> Result<Self> {
        if !(p_f_max >= 0.0) {
            return Err(Error::InvalidParameter("region: p_f_max must be >= 0".into()));
        }
        if p_grid < 2 || alpha_grid < 2 || r_sweep < 2 {
            return Err(Error::InvalidParameter("region: grid sizes must be >= 2".into()));
        }
        Ok(Self { p_f_max, p_grid, alpha_grid, r_sweep, objective })
    }
}

/// One boundary sample: achieved far-user rate `s` at near-user target
/// `r_bar`, together with the achieving power and time share.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub r_bar: f64,
    pub s: f64,
    pub p_f: f64,
    pub alpha_f: f64,
}

/// Maximize the far-user objective over the p×α grid subject to the
/// near-user rate constraint. Ties resolve to the smallest p_f, then the
/// smallest α_f.
pub fn boundary_point(
    r_bar: f64,
    spec: &RegionSpec,
    st: &FadingState,
    params: &SystemParams,
) -> Result<RegionPoint> {
    let ceiling = params.rate_off(st.near_gain);
    if r_bar > ceiling {
        return Err(Error::Infeasible(format!(
            "region: target rate {r_bar} exceeds the interference-free rate {ceiling}"
        )));
    }

    let p_step = spec.p_f_max / (spec.p_grid - 1) as f64;
    let a_step = 1.0 / (spec.alpha_grid - 1) as f64;

    // Row best per power level: (objective, alpha index). Within a row the
    // scan order already prefers the smallest alpha on ties.
    let rows: Vec<Option<(f64, usize)>> = (0..spec.p_grid)
        .into_par_iter()
        .map(|i| {
            let p = if i == spec.p_grid - 1 { spec.p_f_max } else { p_step * i as f64 };
            let per_time = match spec.objective {
                RegionObjective::SemCom => far_semcom_rate(p, st, params),
                RegionObjective::BitComEquivalent => far_bitcom_rate(p, st, params),
            };
            let shared = (1.0
                + params.p_near * st.near_gain / (p * st.far_gain + params.noise_power))
                .log2();
            let mut best: Option<(f64, usize)> = None;
            for j in 0..spec.alpha_grid {
                let alpha = if j == spec.alpha_grid - 1 { 1.0 } else { a_step * j as f64 };
                let rate = alpha * shared + (1.0 - alpha) * ceiling;
                if rate < r_bar {
                    // rate is non-increasing in alpha for p > 0; scan on for
                    // p = 0 where it is constant.
                    if p > 0.0 {
                        break;
                    }
                    continue;
                }
                let value = alpha * per_time;
                if best.map_or(true, |(bv, _)| value > bv) {
                    best = Some((value, j));
                }
            }
            best
        })
        .collect();

    let mut winner: Option<(f64, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate() {
        if let Some((value, j)) = row {
            if winner.map_or(true, |(bv, _, _)| *value > bv) {
                winner = Some((*value, i, *j));
            }
        }
    }

    let (s, i, j) = winner.ok_or_else(|| {
        Error::Infeasible(format!("region: no grid point satisfies the target rate {r_bar}"))
    })?;
    let p_f = if i == spec.p_grid - 1 { spec.p_f_max } else { p_step * i as f64 };
    let alpha_f = if j == spec.alpha_grid - 1 { 1.0 } else { a_step * j as f64 };
    Ok(RegionPoint { r_bar, s, p_f, alpha_f })
}

/// Trace the boundary with `r_sweep` uniformly spaced targets on
/// [0, interference-free ceiling].
pub fn sweep_boundary(
    spec: &RegionSpec,
    st: &FadingState,
    params: &SystemParams,
) -> Result<Vec<RegionPoint>> {
    let ceiling = params.rate_off(st.near_gain);
    let n = spec.r_sweep;
    (0..n)
        .map(|k| {
            let r_bar =
                if k == n - 1 { ceiling } else { ceiling * k as f64 / (n - 1) as f64 };
            boundary_point(r_bar, spec, st, params)
        })
        .collect()
}
