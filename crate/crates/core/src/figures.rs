//! Figure-data sweeps. Each figure produces deterministic CSV rows; plotting
//! is left to external tools.

use crate::continuous::{ellipsoid_core, recover_core, ContinuousConfig, Workspace};
use crate::csvfmt::sig12;
use crate::link::{sample_states, static_state, FadingState, SystemParams};
use crate::onoff::{solve_restricted as solve_onoff, OnOffConfig};
use crate::region::{sweep_boundary, RegionObjective, RegionSpec};
use crate::schemes::{evaluate_policy, ModePolicy, PowerPolicy, SchemeId, TimePolicy};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// Static-channel rate-region boundaries for both objectives.
    Region,
    /// Ergodic semantic rate vs the rate target, on-off resource management.
    SVsRbarOnOff,
    /// Ergodic semantic rate vs the on-power, on-off resource management.
    SVsP0,
    /// Occupancy of the off/BitCom/SemCom modes.
    TimeFractions,
    /// Ergodic semantic rate vs the rate target, continuous management.
    SVsRbarContinuous,
    /// Ergodic semantic rate vs the average power cap.
    SVsPavg,
    /// The four power/time resource-management variants side by side.
    RmComparison,
}

impl FigureId {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "region" | "fig2" => Some(Self::Region),
            "s_vs_rbar_s1" | "fig5" => Some(Self::SVsRbarOnOff),
            "s_vs_p0_s1" | "fig6" => Some(Self::SVsP0),
            "time_fractions" | "fig7" => Some(Self::TimeFractions),
            "s_vs_rbar_s2" | "fig8" => Some(Self::SVsRbarContinuous),
            "s_vs_pavg_s2" | "svp" => Some(Self::SVsPavg),
            "rm_comparison" | "fig9" => Some(Self::RmComparison),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Region => "region",
            Self::SVsRbarOnOff => "s_vs_rbar_s1",
            Self::SVsP0 => "s_vs_p0_s1",
            Self::TimeFractions => "time_fractions",
            Self::SVsRbarContinuous => "s_vs_rbar_s2",
            Self::SVsPavg => "s_vs_pavg_s2",
            Self::RmComparison => "rm_comparison",
        }
    }

    pub fn all() -> [FigureId; 7] {
        [
            Self::Region,
            Self::SVsRbarOnOff,
            Self::SVsP0,
            Self::TimeFractions,
            Self::SVsRbarContinuous,
            Self::SVsPavg,
            Self::RmComparison,
        ]
    }
}

/// Sweep definitions for every figure, with the reference defaults.
#[derive(Debug, Clone)]
pub struct FigureConfig {
    pub seed: u64,
    pub state_count: usize,
    /// Rate targets as fractions of the sampled all-off ceiling.
    pub r_bar_fracs: Vec<f64>,
    /// On-power cases for the rate-target sweep.
    pub p0_cases: Vec<f64>,
    /// On-power sweep values.
    pub p0_sweep: Vec<f64>,
    /// Absolute rate-target cases (bits/s/Hz).
    pub r_bar_cases: Vec<f64>,
    /// (average, peak) power budget cases for the continuous sweep.
    pub budget_cases: Vec<(f64, f64)>,
    /// Average-power sweep values (at `pavg_peak` peak power).
    pub pavg_sweep: Vec<f64>,
    pub pavg_peak: f64,
    /// (average, peak) budget for the resource-management comparison.
    pub rm_budget: (f64, f64),
    pub region_p_f_max: Vec<f64>,
    pub region_grid: usize,
    pub region_sweep: usize,
    pub lambda_tol: f64,
    pub power_grid: usize,
    pub ellipsoid_tol: f64,
    pub ellipsoid_max_iters: usize,
}

impl Default for FigureConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            state_count: 10_000,
            r_bar_fracs: (0..13).map(|i| i as f64 * 0.08).collect(),
            p0_cases: vec![2.0, 10.0],
            p0_sweep: vec![0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0],
            r_bar_cases: vec![4.0, 8.0],
            budget_cases: vec![(1.0, 2.0), (8.0, 10.0)],
            pavg_sweep: vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0],
            pavg_peak: 10.0,
            rm_budget: (8.0, 10.0),
            region_p_f_max: vec![0.1, 10.0],
            region_grid: 401,
            region_sweep: 41,
            lambda_tol: 1e-4,
            power_grid: 1001,
            ellipsoid_tol: 1e-5,
            ellipsoid_max_iters: 500,
        }
    }
}

/// A named table of formatted CSV rows.
#[derive(Debug, Clone)]
pub struct FigureData {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

const MODE_SCHEMES: [ModePolicy; 3] =
    [ModePolicy::Opportunistic, ModePolicy::SemComOnly, ModePolicy::BitComOnly];

fn mode_name(mode: ModePolicy) -> &'static str {
    match mode {
        ModePolicy::Opportunistic => "opportunistic",
        ModePolicy::SemComOnly => "semcom_only",
        ModePolicy::BitComOnly => "bitcom_only",
    }
}

fn sampled(cfg: &FigureConfig, params: &SystemParams) -> Result<(Vec<FadingState>, f64)> {
    let states = sample_states(cfg.seed, cfg.state_count, params)?;
    let ceiling =
        states.iter().map(|s| params.rate_off(s.near_gain)).sum::<f64>() / states.len() as f64;
    Ok((states, ceiling))
}

fn onoff_cfg(cfg: &FigureConfig, p0: f64, r_bar: f64) -> OnOffConfig {
    OnOffConfig { p0, r_bar, lambda_tol: cfg.lambda_tol, lambda_max_doublings: 60 }
}

fn continuous_cfg(cfg: &FigureConfig, r_bar: f64, p_avg: f64, p_peak: f64) -> ContinuousConfig {
    ContinuousConfig {
        r_bar,
        p_avg,
        p_peak,
        power_grid: cfg.power_grid,
        ellipsoid_tol: cfg.ellipsoid_tol,
        ellipsoid_max_iters: cfg.ellipsoid_max_iters,
    }
}

/// Run one figure sweep and return its rows.
pub fn run_figure(
    fig: FigureId,
    cfg: &FigureConfig,
    params: &SystemParams,
) -> Result<FigureData> {
    match fig {
        FigureId::Region => region_rows(cfg, params),
        FigureId::SVsRbarOnOff => s_vs_rbar_onoff(cfg, params),
        FigureId::SVsP0 => s_vs_p0(cfg, params),
        FigureId::TimeFractions => time_fractions(cfg, params),
        FigureId::SVsRbarContinuous => s_vs_rbar_continuous(cfg, params),
        FigureId::SVsPavg => s_vs_pavg(cfg, params),
        FigureId::RmComparison => rm_comparison(cfg, params),
    }
}

fn region_rows(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let st = static_state(params);
    let mut rows = Vec::new();
    for &p_f_max in &cfg.region_p_f_max {
        for objective in [RegionObjective::SemCom, RegionObjective::BitComEquivalent] {
            let spec = RegionSpec::new(
                p_f_max,
                cfg.region_grid,
                cfg.region_grid,
                cfg.region_sweep,
                objective,
            )?;
            for pt in sweep_boundary(&spec, &st, params)? {
                rows.push(vec![
                    objective.name().to_string(),
                    sig12(p_f_max),
                    sig12(pt.r_bar),
                    sig12(pt.s),
                    sig12(pt.p_f),
                    sig12(pt.alpha_f),
                ]);
            }
        }
    }
    Ok(FigureData {
        name: FigureId::Region.name(),
        header: vec!["objective", "p_f_max", "r_bar", "s", "p_f", "alpha_f"],
        rows,
    })
}

fn s_vs_rbar_onoff(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let (states, ceiling) = sampled(cfg, params)?;
    let mut rows = Vec::new();
    for &p0 in &cfg.p0_cases {
        for mode in MODE_SCHEMES {
            for &frac in &cfg.r_bar_fracs {
                let oc = onoff_cfg(cfg, p0, frac * ceiling);
                let sol = solve_onoff(&states, &oc, params, mode)?;
                rows.push(vec![
                    mode_name(mode).to_string(),
                    sig12(p0),
                    sig12(oc.r_bar),
                    sig12(sol.ergodic_s),
                    sig12(sol.ergodic_r),
                    sig12(sol.lambda_star),
                ]);
            }
        }
    }
    Ok(FigureData {
        name: FigureId::SVsRbarOnOff.name(),
        header: vec!["scheme", "p0", "r_bar", "ergodic_s", "ergodic_r", "lambda_star"],
        rows,
    })
}

fn s_vs_p0(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let (states, _) = sampled(cfg, params)?;
    let mut rows = Vec::new();
    for &r_bar in &cfg.r_bar_cases {
        for mode in MODE_SCHEMES {
            for &p0 in &cfg.p0_sweep {
                let oc = onoff_cfg(cfg, p0, r_bar);
                let sol = solve_onoff(&states, &oc, params, mode)?;
                rows.push(vec![
                    mode_name(mode).to_string(),
                    sig12(r_bar),
                    sig12(p0),
                    sig12(sol.ergodic_s),
                    sig12(sol.ergodic_r),
                    sig12(sol.lambda_star),
                ]);
            }
        }
    }
    Ok(FigureData {
        name: FigureId::SVsP0.name(),
        header: vec!["scheme", "r_bar", "p0", "ergodic_s", "ergodic_r", "lambda_star"],
        rows,
    })
}

fn time_fractions(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let (states, _) = sampled(cfg, params)?;
    let mut rows = Vec::new();
    for &r_bar in &cfg.r_bar_cases {
        for &p0 in &cfg.p0_cases {
            let oc = onoff_cfg(cfg, p0, r_bar);
            let sol = solve_onoff(&states, &oc, params, ModePolicy::Opportunistic)?;
            let ev = evaluate_policy(&sol.decisions, &states, params)?;
            rows.push(vec![
                sig12(r_bar),
                sig12(p0),
                sig12(ev.time_off),
                sig12(ev.time_bitcom),
                sig12(ev.time_semcom),
            ]);
        }
    }
    Ok(FigureData {
        name: FigureId::TimeFractions.name(),
        header: vec!["r_bar", "p0", "off", "bitcom", "semcom"],
        rows,
    })
}

/// Solve the continuous problem reusing one workspace per power policy.
fn continuous_row(
    states: &[FadingState],
    ws: &Workspace,
    cc: &ContinuousConfig,
    params: &SystemParams,
    scheme: &SchemeId,
) -> Result<crate::continuous::ContinuousSolution> {
    let dual = ellipsoid_core(ws, cc, scheme.mode_policy)?;
    recover_core(states, ws, &dual, cc, params, scheme)
}

fn s_vs_rbar_continuous(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let (states, ceiling) = sampled(cfg, params)?;
    let mut rows = Vec::new();
    for &(p_avg, p_peak) in &cfg.budget_cases {
        let base = continuous_cfg(cfg, 0.0, p_avg, p_peak);
        let ws = Workspace::new(&states, &base, params, PowerPolicy::Continuous);
        for mode in MODE_SCHEMES {
            let scheme = SchemeId { mode_policy: mode, ..SchemeId::unrestricted() };
            for &frac in &cfg.r_bar_fracs {
                let cc = ContinuousConfig { r_bar: frac * ceiling, ..base };
                let sol = continuous_row(&states, &ws, &cc, params, &scheme)?;
                rows.push(vec![
                    mode_name(mode).to_string(),
                    sig12(p_avg),
                    sig12(p_peak),
                    sig12(cc.r_bar),
                    sig12(sol.ergodic_s),
                    sig12(sol.ergodic_r),
                    sig12(sol.avg_power),
                    sig12(sol.duals.beta),
                    sig12(sol.duals.delta),
                    sig12(sol.dual_gap),
                ]);
            }
        }
    }
    Ok(FigureData {
        name: FigureId::SVsRbarContinuous.name(),
        header: vec![
            "scheme", "p_avg", "p_peak", "r_bar", "ergodic_s", "ergodic_r", "avg_power",
            "beta", "delta", "dual_gap",
        ],
        rows,
    })
}

fn s_vs_pavg(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let (states, _) = sampled(cfg, params)?;
    let base = continuous_cfg(cfg, 0.0, cfg.pavg_peak, cfg.pavg_peak);
    let ws = Workspace::new(&states, &base, params, PowerPolicy::Continuous);
    let mut rows = Vec::new();
    for &r_bar in &cfg.r_bar_cases {
        for mode in MODE_SCHEMES {
            let scheme = SchemeId { mode_policy: mode, ..SchemeId::unrestricted() };
            for &p_avg in &cfg.pavg_sweep {
                let cc = ContinuousConfig { r_bar, p_avg, ..base };
                let sol = continuous_row(&states, &ws, &cc, params, &scheme)?;
                rows.push(vec![
                    mode_name(mode).to_string(),
                    sig12(r_bar),
                    sig12(p_avg),
                    sig12(sol.ergodic_s),
                    sig12(sol.ergodic_r),
                    sig12(sol.avg_power),
                ]);
            }
        }
    }
    Ok(FigureData {
        name: FigureId::SVsPavg.name(),
        header: vec!["scheme", "r_bar", "p_avg", "ergodic_s", "ergodic_r", "avg_power"],
        rows,
    })
}

const RM_VARIANTS: [(PowerPolicy, TimePolicy, &str); 4] = [
    (PowerPolicy::Continuous, TimePolicy::Continuous, "cpc_cts"),
    (PowerPolicy::Continuous, TimePolicy::OnOff, "cpc_ots"),
    (PowerPolicy::OnOff, TimePolicy::Continuous, "opc_cts"),
    (PowerPolicy::OnOff, TimePolicy::OnOff, "opc_ots"),
];

fn rm_comparison(cfg: &FigureConfig, params: &SystemParams) -> Result<FigureData> {
    let (states, ceiling) = sampled(cfg, params)?;
    let (p_avg, p_peak) = cfg.rm_budget;
    let base = continuous_cfg(cfg, 0.0, p_avg, p_peak);
    let ws_cont = Workspace::new(&states, &base, params, PowerPolicy::Continuous);
    let ws_onoff = Workspace::new(&states, &base, params, PowerPolicy::OnOff);
    let mut rows = Vec::new();
    for (power, time, label) in RM_VARIANTS {
        let scheme = SchemeId {
            mode_policy: ModePolicy::Opportunistic,
            power_policy: power,
            time_policy: time,
        };
        let ws = match power {
            PowerPolicy::Continuous => &ws_cont,
            PowerPolicy::OnOff => &ws_onoff,
        };
        for &frac in &cfg.r_bar_fracs {
            let cc = ContinuousConfig { r_bar: frac * ceiling, ..base };
            let sol = continuous_row(&states, ws, &cc, params, &scheme)?;
            rows.push(vec![
                label.to_string(),
                sig12(cc.r_bar),
                sig12(sol.ergodic_s),
                sig12(sol.ergodic_r),
                sig12(sol.avg_power),
            ]);
        }
    }
    Ok(FigureData {
        name: FigureId::RmComparison.name(),
        header: vec!["variant", "r_bar", "ergodic_s", "ergodic_r", "avg_power"],
        rows,
    })
}

/// The ergodic all-off ceiling of a sampled instance; figure sweeps express
/// rate targets as fractions of it.
pub fn sample_ceiling(states: &[FadingState], params: &SystemParams) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::Argument("sample_ceiling: no states".into()));
    }
    Ok(states.iter().map(|s| params.rate_off(s.near_gain)).sum::<f64>() / states.len() as f64)
}
