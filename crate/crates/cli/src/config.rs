//! Run configuration: one TOML file covering the system model, the Monte
//! Carlo draw, and every command's knobs. All defaults reproduce the
//! reference setup (10 m / 30 m links, -30 dB reference loss, exponent 4,
//! -80 dBm noise, 1 W near-user power, K = 5 with ε̄ = 0.9, μ = 40, ε_C = 1).

use anyhow::{anyhow, bail, Context, Result};
use semnoma_core::continuous::ContinuousConfig;
use semnoma_core::figures::FigureConfig;
use semnoma_core::link::{LinkGeometry, SystemParams};
use semnoma_core::onoff::OnOffConfig;
use semnoma_core::region::{RegionObjective, RegionSpec};
use semnoma_core::semantic::{calibrate_midpoint, BitComProfile, LogisticParams, SemComProfile};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub system: SystemSection,
    pub semantic: SemanticSection,
    pub bitcom: BitComSection,
    pub monte_carlo: MonteCarloSection,
    pub region: RegionSection,
    pub scenario1: Scenario1Section,
    pub scenario2: Scenario2Section,
    pub figure: FigureSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemSection {
    pub p_n_watts: f64,
    pub noise_dbm: f64,
    pub n_user: LinkSection,
    pub f_user: LinkSection,
}

impl Default for SystemSection {
    fn default() -> Self {
        Self {
            p_n_watts: 1.0,
            noise_dbm: -80.0,
            n_user: LinkSection { distance_m: 10.0, rho0_db: -30.0, path_exp: 4.0 },
            f_user: LinkSection { distance_m: 30.0, rho0_db: -30.0, path_exp: 4.0 },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub distance_m: f64,
    pub rho0_db: f64,
    pub path_exp: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemanticSection {
    pub i_suts: f64,
    pub l_words: f64,
    pub k: u32,
    pub eps_bar: f64,
    pub logistic: Vec<LogisticEntry>,
}

impl Default for SemanticSection {
    fn default() -> Self {
        Self { i_suts: 1.0, l_words: 1.0, k: 5, eps_bar: 0.9, logistic: default_logistic_table() }
    }
}

/// One per-K logistic fit. Either `c2` is given directly or an anchor point
/// (`anchor_gamma`, `anchor_eps`) pins the mid-point offset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogisticEntry {
    pub k: u32,
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor_gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor_eps: Option<f64>,
}

pub fn default_logistic_table() -> Vec<LogisticEntry> {
    vec![
        LogisticEntry {
            k: 4,
            a1: 0.1,
            a2: 0.95,
            c1: 0.3,
            c2: None,
            anchor_gamma: Some(1.0),
            anchor_eps: Some(0.5),
        },
        LogisticEntry {
            k: 5,
            a1: 0.1,
            a2: 0.98,
            c1: 0.25,
            c2: Some(-0.25),
            anchor_gamma: None,
            anchor_eps: None,
        },
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BitComSection {
    pub mu: f64,
    pub eps_c: f64,
}

impl Default for BitComSection {
    fn default() -> Self {
        Self { mu: 40.0, eps_c: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonteCarloSection {
    pub seed: u64,
    pub state_count: usize,
}

impl Default for MonteCarloSection {
    fn default() -> Self {
        Self { seed: 42, state_count: 10_000 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegionSection {
    pub p_f_max_watts: f64,
    pub p_grid: usize,
    pub alpha_grid: usize,
    pub r_sweep: usize,
}

impl Default for RegionSection {
    fn default() -> Self {
        Self { p_f_max_watts: 0.1, p_grid: 401, alpha_grid: 401, r_sweep: 41 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario1Section {
    pub p0_watts: f64,
    pub r_bar: f64,
    pub lambda_tol: f64,
    pub lambda_max_doublings: u32,
}

impl Default for Scenario1Section {
    fn default() -> Self {
        Self { p0_watts: 2.0, r_bar: 4.0, lambda_tol: 1e-4, lambda_max_doublings: 60 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Scenario2Section {
    pub r_bar: f64,
    pub p_avg_watts: f64,
    pub p_peak_watts: f64,
    pub power_grid: usize,
    pub ellipsoid_tol: f64,
    pub ellipsoid_max_iters: usize,
}

impl Default for Scenario2Section {
    fn default() -> Self {
        Self {
            r_bar: 4.0,
            p_avg_watts: 1.0,
            p_peak_watts: 2.0,
            power_grid: 1001,
            ellipsoid_tol: 1e-5,
            ellipsoid_max_iters: 500,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureSection {
    pub r_bar_fracs: Vec<f64>,
    pub p0_cases: Vec<f64>,
    pub p0_sweep: Vec<f64>,
    pub r_bar_cases: Vec<f64>,
    pub budget_cases: Vec<[f64; 2]>,
    pub pavg_sweep: Vec<f64>,
    pub pavg_peak: f64,
    pub rm_budget: [f64; 2],
    pub region_p_f_max: Vec<f64>,
}

impl Default for FigureSection {
    fn default() -> Self {
        let d = FigureConfig::default();
        Self {
            r_bar_fracs: d.r_bar_fracs,
            p0_cases: d.p0_cases,
            p0_sweep: d.p0_sweep,
            r_bar_cases: d.r_bar_cases,
            budget_cases: d.budget_cases.iter().map(|&(a, p)| [a, p]).collect(),
            pavg_sweep: d.pavg_sweep,
            pavg_peak: d.pavg_peak,
            rm_budget: [d.rm_budget.0, d.rm_budget.1],
            region_p_f_max: d.region_p_f_max,
        }
    }
}

/// Reproducibility record written next to every figure CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub figure: String,
    pub seed: u64,
    pub state_count: usize,
    /// Name of the standalone config file usable with --config.
    pub resolved_config: String,
    pub config: RunConfig,
}

impl Manifest {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).context("cannot serialize the manifest")
    }
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text)
            .with_context(|| format!("malformed config in {}", path.display()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).context("cannot serialize the resolved config")
    }

    fn logistic_for(&self, k: u32) -> Result<LogisticParams> {
        let entry = self
            .semantic
            .logistic
            .iter()
            .find(|e| e.k == k)
            .ok_or_else(|| anyhow!("semantic.logistic: no entry for k = {k}"))?;
        let base = LogisticParams::new(entry.k, entry.a1, entry.a2, entry.c1, 0.0)
            .map_err(|e| anyhow!("semantic.logistic (k = {k}): {e}"))?;
        match (entry.c2, entry.anchor_gamma, entry.anchor_eps) {
            (Some(c2), None, None) => LogisticParams::new(entry.k, entry.a1, entry.a2, entry.c1, c2)
                .map_err(|e| anyhow!("semantic.logistic (k = {k}): {e}")),
            (None, Some(g), Some(eps)) => calibrate_midpoint(&base, g, eps)
                .map_err(|e| anyhow!("semantic.logistic (k = {k}): {e}")),
            _ => bail!(
                "semantic.logistic (k = {k}): give either c2 or both anchor_gamma and anchor_eps"
            ),
        }
    }

    pub fn to_params(&self) -> Result<SystemParams> {
        let logistic = self.logistic_for(self.semantic.k)?;
        let semcom = SemComProfile::new(
            self.semantic.i_suts,
            self.semantic.l_words,
            self.semantic.k,
            self.semantic.eps_bar,
            logistic,
        )
        .map_err(|e| anyhow!("semantic: {e}"))?;
        let bitcom = BitComProfile::new(self.bitcom.mu, self.bitcom.eps_c)
            .map_err(|e| anyhow!("bitcom: {e}"))?;
        let n_user = LinkGeometry::new(
            self.system.n_user.distance_m,
            self.system.n_user.rho0_db,
            self.system.n_user.path_exp,
        )
        .map_err(|e| anyhow!("system.n_user: {e}"))?;
        let f_user = LinkGeometry::new(
            self.system.f_user.distance_m,
            self.system.f_user.rho0_db,
            self.system.f_user.path_exp,
        )
        .map_err(|e| anyhow!("system.f_user: {e}"))?;
        let noise_watts = 10f64.powf(self.system.noise_dbm / 10.0) * 1e-3;
        SystemParams::new(self.system.p_n_watts, noise_watts, n_user, f_user, semcom, bitcom)
            .map_err(|e| anyhow!("system: {e}"))
    }

    pub fn region_spec(&self, objective: RegionObjective) -> Result<RegionSpec> {
        RegionSpec::new(
            self.region.p_f_max_watts,
            self.region.p_grid,
            self.region.alpha_grid,
            self.region.r_sweep,
            objective,
        )
        .map_err(|e| anyhow!("region: {e}"))
    }

    pub fn onoff_config(&self) -> Result<OnOffConfig> {
        let cfg = OnOffConfig {
            p0: self.scenario1.p0_watts,
            r_bar: self.scenario1.r_bar,
            lambda_tol: self.scenario1.lambda_tol,
            lambda_max_doublings: self.scenario1.lambda_max_doublings,
        };
        cfg.validate().map_err(|e| anyhow!("scenario1: {e}"))?;
        Ok(cfg)
    }

    pub fn continuous_config(&self) -> Result<ContinuousConfig> {
        let cfg = ContinuousConfig {
            r_bar: self.scenario2.r_bar,
            p_avg: self.scenario2.p_avg_watts,
            p_peak: self.scenario2.p_peak_watts,
            power_grid: self.scenario2.power_grid,
            ellipsoid_tol: self.scenario2.ellipsoid_tol,
            ellipsoid_max_iters: self.scenario2.ellipsoid_max_iters,
        };
        cfg.validate().map_err(|e| anyhow!("scenario2: {e}"))?;
        Ok(cfg)
    }

    pub fn figure_config(&self) -> FigureConfig {
        FigureConfig {
            seed: self.monte_carlo.seed,
            state_count: self.monte_carlo.state_count,
            r_bar_fracs: self.figure.r_bar_fracs.clone(),
            p0_cases: self.figure.p0_cases.clone(),
            p0_sweep: self.figure.p0_sweep.clone(),
            r_bar_cases: self.figure.r_bar_cases.clone(),
            budget_cases: self.figure.budget_cases.iter().map(|b| (b[0], b[1])).collect(),
            pavg_sweep: self.figure.pavg_sweep.clone(),
            pavg_peak: self.figure.pavg_peak,
            rm_budget: (self.figure.rm_budget[0], self.figure.rm_budget[1]),
            region_p_f_max: self.figure.region_p_f_max.clone(),
            region_grid: self.region.p_grid,
            region_sweep: self.region.r_sweep,
            lambda_tol: self.scenario1.lambda_tol,
            power_grid: self.scenario2.power_grid,
            ellipsoid_tol: self.scenario2.ellipsoid_tol,
            ellipsoid_max_iters: self.scenario2.ellipsoid_max_iters,
        }
    }
}
