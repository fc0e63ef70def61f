//! Path loss, fading-state sampling, SNR, and the instantaneous NOMA rates.
//!
//! Uplink NOMA with SIC: the access point decodes the near user's bit signal
//! first (under the far user's interference during the shared time portion α),
//! then decodes the far user interference-free. The near-user rate at one
//! fading state is
//!
//! ```text
//! R(v) = α·log2(1 + P_n·g_n/(p·g_f + σ²)) + (1−α)·log2(1 + P_n·g_n/σ²)
//! ```
//!
//! where `g_n`, `g_f` are the squared channel magnitudes. Rayleigh fading on
//! the amplitude means the power gains are unit-mean exponential draws scaled
//! by the distance-dependent path loss.

use crate::semantic::{
    effective_semantic_rate, equivalent_semantic_rate, BitComProfile, SemComProfile,
};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Distance-dependent path-loss model for one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    /// Link distance in meters (> 0).
    pub distance_m: f64,
    /// Reference path loss at 1 m, in dB.
    pub rho0_db: f64,
    /// Path-loss exponent (> 0).
    pub path_exp: f64,
}

impl LinkGeometry {
    pub fn new(distance_m: f64, rho0_db: f64, path_exp: f64) -> Result<Self> {
        if !(distance_m > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "link: distance must be > 0 m, got {distance_m}"
            )));
        }
        if !(path_exp > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "link: path-loss exponent must be > 0, got {path_exp}"
            )));
        }
        Ok(Self { distance_m, rho0_db, path_exp })
    }
}

/// Linear average power gain: 10^(ρ₀/10) · (1/d)^β.
pub fn path_loss(geom: &LinkGeometry) -> f64 {
    10f64.powf(geom.rho0_db / 10.0) * (1.0 / geom.distance_m).powf(geom.path_exp)
}

/// System-wide parameters shared by every solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Near-user constant transmit power P_n, Watts.
    pub p_near: f64,
    /// Noise power σ² at the access point, Watts.
    pub noise_power: f64,
    /// Near-user link geometry.
    pub near_link: LinkGeometry,
    /// Far-user link geometry.
    pub far_link: LinkGeometry,
    /// Far-user SemCom profile.
    pub semcom: SemComProfile,
    /// Far-user BitCom profile.
    pub bitcom: BitComProfile,
}

impl SystemParams {
    pub fn new(
        p_near: f64,
        noise_power: f64,
        near_link: LinkGeometry,
        far_link: LinkGeometry,
        semcom: SemComProfile,
        bitcom: BitComProfile,
    ) -> Result<Self> {
        if !(p_near > 0.0) {
            return Err(Error::InvalidParameter("system: near-user power must be > 0 W".into()));
        }
        if !(noise_power > 0.0) {
            return Err(Error::InvalidParameter("system: noise power must be > 0 W".into()));
        }
        Ok(Self { p_near, noise_power, near_link, far_link, semcom, bitcom })
    }

    /// Interference-free near-user rate for a given near gain.
    pub fn rate_off(&self, near_gain: f64) -> f64 {
        (1.0 + self.p_near * near_gain / self.noise_power).log2()
    }
}

/// One block-fading realization: squared channel magnitudes of both links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingState {
    pub index: usize,
    /// |h_n(v)|², linear power gain of the near-user link.
    pub near_gain: f64,
    /// |h_f(v)|², linear power gain of the far-user link.
    pub far_gain: f64,
}

/// Per-state resource decision of the far user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyDecision {
    /// true: SemCom, false: BitCom.
    pub use_semcom: bool,
    /// Time share α ∈ [0, 1].
    pub alpha: f64,
    /// Transmit power in Watts (≥ 0).
    pub power: f64,
}

impl PolicyDecision {
    pub const OFF: PolicyDecision = PolicyDecision { use_semcom: false, alpha: 0.0, power: 0.0 };
}

/// Draw `count` i.i.d. Rayleigh-faded states; the power gains are unit-mean
/// exponentials scaled by each link's path loss. Deterministic per seed.
pub fn sample_states(seed: u64, count: usize, params: &SystemParams) -> Result<Vec<FadingState>> {
    if count == 0 {
        return Err(Error::Argument("sample_states: count must be >= 1".into()));
    }
    let pl_n = path_loss(&params.near_link);
    let pl_f = path_loss(&params.far_link);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(count);
    for index in 0..count {
        // Inverse-CDF exponential draws keep the stream stable across rand
        // versions. gen::<f64>() is in [0, 1), so 1-u is in (0, 1].
        let u_n: f64 = rng.gen();
        let u_f: f64 = rng.gen();
        let e_n = -(1.0 - u_n).ln();
        let e_f = -(1.0 - u_f).ln();
        states.push(FadingState { index, near_gain: pl_n * e_n, far_gain: pl_f * e_f });
    }
    Ok(states)
}

/// The deterministic path-loss-only state used for static-channel analysis.
pub fn static_state(params: &SystemParams) -> FadingState {
    FadingState {
        index: 0,
        near_gain: path_loss(&params.near_link),
        far_gain: path_loss(&params.far_link),
    }
}

/// Received linear SNR p·g/σ².
pub fn snr(p: f64, gain: f64, noise_power: f64) -> Result<f64> {
    if !(noise_power > 0.0) {
        return Err(Error::Argument("snr: noise power must be > 0".into()));
    }
    Ok(p * gain / noise_power)
}

/// Near-user bit rate at one fading state under time share α and far-user
/// interference power `p_f` during the shared portion.
pub fn n_user_bit_rate(alpha: f64, p_f: f64, st: &FadingState, params: &SystemParams) -> f64 {
    let shared = (1.0
        + params.p_near * st.near_gain / (p_f * st.far_gain + params.noise_power))
        .log2();
    let exclusive = params.rate_off(st.near_gain);
    alpha * shared + (1.0 - alpha) * exclusive
}

/// Far-user per-unit-time semantic rate S_s at power `p` (SIC leaves the far
/// user interference-free), with the time share factored out.
pub fn far_semcom_rate(p: f64, st: &FadingState, params: &SystemParams) -> f64 {
    let gamma = p * st.far_gain / params.noise_power;
    effective_semantic_rate(&params.semcom, 1.0, gamma)
}

/// Far-user per-unit-time equivalent semantic rate S_b at power `p`.
pub fn far_bitcom_rate(p: f64, st: &FadingState, params: &SystemParams) -> f64 {
    let gamma = p * st.far_gain / params.noise_power;
    equivalent_semantic_rate(&params.bitcom, &params.semcom, 1.0, gamma)
}

/// Instantaneous far-user semantic rate α·{ρ·S_s + (1−ρ)·S_b}.
pub fn f_user_semantic_rate(dec: &PolicyDecision, st: &FadingState, params: &SystemParams) -> f64 {
    if dec.alpha == 0.0 {
        return 0.0;
    }
    let per_time = if dec.use_semcom {
        far_semcom_rate(dec.power, st, params)
    } else {
        far_bitcom_rate(dec.power, st, params)
    };
    dec.alpha * per_time
}
