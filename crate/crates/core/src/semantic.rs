//! Semantic-similarity surrogate and semantic rate models.
//!
//! The DeepSC text-transmission similarity is approximated per K (semantic
//! symbols per word) by a generalized logistic in the received SNR γ:
//!
//! ```text
//! ε̃_K(γ) = a1 + (a2 − a1) / (1 + exp(−(c1·γ + c2)))
//! ```
//!
//! with lower/upper asymptotes `0 < a1 < a2 ≤ 1` and growth rate `c1 > 0`.
//! The effective semantic rate gates the per-symbol similarity by a minimum
//! threshold ε̄, and a BitCom link is made comparable by converting its bit
//! rate into an equivalent semantic rate through the bits-per-word budget μ.

use crate::{Error, Result};

/// Generalized-logistic similarity parameters for one value of K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    /// Semantic symbols per word this fit applies to.
    pub k: u32,
    /// Lower (left) asymptote.
    pub a1: f64,
    /// Upper (right) asymptote.
    pub a2: f64,
    /// Logistic growth rate.
    pub c1: f64,
    /// Mid-point offset.
    pub c2: f64,
}

impl LogisticParams {
    pub fn new(k: u32, a1: f64, a2: f64, c1: f64, c2: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("logistic: k must be >= 1".into()));
        }
        if !(a1 > 0.0 && a1 < a2 && a2 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "logistic: need 0 < a1 < a2 <= 1, got a1={a1}, a2={a2}"
            )));
        }
        if !(c1 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "logistic: growth rate c1 must be > 0, got {c1}"
            )));
        }
        if !c2.is_finite() {
            return Err(Error::InvalidParameter("logistic: c2 must be finite".into()));
        }
        Ok(Self { k, a1, a2, c1, c2 })
    }

    /// Default K = 4 fit: asymptotes (0.1, 0.95), growth 0.3, mid-point offset
    /// calibrated so that ε̃(1) = 0.5 (the 0 dB anchor).
    pub fn default_k4() -> Self {
        let base = Self::new(4, 0.1, 0.95, 0.3, 0.0).expect("valid defaults");
        calibrate_midpoint(&base, 1.0, 0.5).expect("anchor inside (a1, a2)")
    }

    /// Default K = 5 fit: asymptotes (0.1, 0.98), growth 0.25, offset -0.25.
    pub fn default_k5() -> Self {
        Self::new(5, 0.1, 0.98, 0.25, -0.25).expect("valid defaults")
    }
}

/// SemCom text-transmission profile for the far user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemComProfile {
    /// Average semantic information per sentence, in suts (symbol I).
    pub info_suts: f64,
    /// Average words per sentence (symbol L).
    pub words_per_sentence: f64,
    /// Semantic symbols per word (symbol K).
    pub symbols_per_word: u32,
    /// Minimum similarity ε̄ for the transmission to count, in (0, 1].
    pub min_similarity: f64,
    /// Logistic similarity fit for this K.
    pub logistic: LogisticParams,
}

impl SemComProfile {
    pub fn new(
        info_suts: f64,
        words_per_sentence: f64,
        symbols_per_word: u32,
        min_similarity: f64,
        logistic: LogisticParams,
    ) -> Result<Self> {
        if !(info_suts > 0.0) || !(words_per_sentence > 0.0) {
            return Err(Error::InvalidParameter(
                "semcom: info_suts and words_per_sentence must be > 0".into(),
            ));
        }
        if symbols_per_word < 1 {
            return Err(Error::InvalidParameter("semcom: symbols_per_word must be >= 1".into()));
        }
        if !(min_similarity > 0.0 && min_similarity <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "semcom: min_similarity must be in (0, 1], got {min_similarity}"
            )));
        }
        if logistic.k != symbols_per_word {
            return Err(Error::InvalidParameter(format!(
                "semcom: logistic fit is for K={}, profile has K={symbols_per_word}",
                logistic.k
            )));
        }
        Ok(Self { info_suts, words_per_sentence, symbols_per_word, min_similarity, logistic })
    }

    /// suts per second per Hz per unit similarity: I / (K·L).
    pub fn rate_scale(&self) -> f64 {
        self.info_suts / (self.symbols_per_word as f64 * self.words_per_sentence)
    }

    /// Hard ceiling of the effective semantic rate at alpha = 1: I·a2/(K·L).
    pub fn rate_ceiling(&self) -> f64 {
        self.rate_scale() * self.logistic.a2
    }
}

/// BitCom profile used for the equivalent-semantic-rate conversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitComProfile {
    /// Average bits per word (symbol μ).
    pub bits_per_word: f64,
    /// Semantic similarity achieved by BitCom (ε_C), in (0, 1].
    pub bit_similarity: f64,
}

impl BitComProfile {
    pub fn new(bits_per_word: f64, bit_similarity: f64) -> Result<Self> {
        if !(bits_per_word > 0.0) {
            return Err(Error::InvalidParameter("bitcom: bits_per_word must be > 0".into()));
        }
        if !(bit_similarity > 0.0 && bit_similarity <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bitcom: bit_similarity must be in (0, 1], got {bit_similarity}"
            )));
        }
        Ok(Self { bits_per_word, bit_similarity })
    }
}

/// Logistic similarity ε̃_K(γ) at linear SNR `gamma`.
///
/// Strictly increasing in γ with open bounds (a1, a2).
pub fn similarity(params: &LogisticParams, gamma: f64) -> f64 {
    debug_assert!(gamma >= 0.0);
    params.a1 + (params.a2 - params.a1) / (1.0 + (-(params.c1 * gamma + params.c2)).exp())
}

/// Linear SNR at which the similarity crosses `eps` from below.
///
/// Returns `None` when `eps` is above the reachable range (similarity never
/// valid) and `Some(0.0)` when the similarity already exceeds `eps` at γ = 0.
pub fn threshold_snr(params: &LogisticParams, eps: f64) -> Option<f64> {
    if eps <= params.a1 {
        return Some(0.0);
    }
    // ε̃(γ) < a2 for all finite γ, so eps >= a2 is unreachable.
    if eps >= params.a2 {
        return None;
    }
    let ratio = (params.a2 - params.a1) / (eps - params.a1) - 1.0;
    let gamma = (-ratio.ln() - params.c2) / params.c1;
    Some(gamma.max(0.0))
}

/// Effective semantic rate (suts/s/Hz): (α·I/(K·L))·ε̃_K(γ)·𝟙(ε̃_K(γ) ≥ ε̄).
pub fn effective_semantic_rate(profile: &SemComProfile, alpha: f64, gamma: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&alpha));
    let eps = similarity(&profile.logistic, gamma);
    if eps >= profile.min_similarity {
        alpha * profile.rate_scale() * eps
    } else {
        0.0
    }
}

/// Equivalent semantic rate of a BitCom link (suts/s/Hz):
/// α·log2(1+γ)·(I/(μ·L))·ε_C.
pub fn equivalent_semantic_rate(
    bp: &BitComProfile,
    profile: &SemComProfile,
    alpha: f64,
    gamma: f64,
) -> f64 {
    alpha
        * (1.0 + gamma).log2()
        * (profile.info_suts / (bp.bits_per_word * profile.words_per_sentence))
        * bp.bit_similarity
}

/// Per-symbol rate gap s^B − s = (1/μ)·log2(1+γ)·ε_C − (1/K)·ε̃_K(γ).
///
/// The similarity indicator is dropped; the sign identifies the preferred
/// method (negative: SemCom wins).
pub fn semcom_bitcom_gap(bp: &BitComProfile, profile: &SemComProfile, gamma: f64) -> f64 {
    let s_bit = (1.0 + gamma).log2() * bp.bit_similarity / bp.bits_per_word;
    let s_sem = similarity(&profile.logistic, gamma) / profile.symbols_per_word as f64;
    s_bit - s_sem
}

/// Refit the mid-point offset c2 so that ε̃(gamma_anchor) = eps_anchor.
///
/// Closed-form logistic inversion:
/// c2 = −ln((a2−a1)/(ε−a1) − 1) − c1·γ_anchor.
pub fn calibrate_midpoint(
    params: &LogisticParams,
    gamma_anchor: f64,
    eps_anchor: f64,
) -> Result<LogisticParams> {
    if !(eps_anchor > params.a1 && eps_anchor < params.a2) {
        return Err(Error::Calibration(format!(
            "anchor similarity {eps_anchor} must lie strictly inside ({}, {})",
            params.a1, params.a2
        )));
    }
    let ratio = (params.a2 - params.a1) / (eps_anchor - params.a1) - 1.0;
    let c2 = -ratio.ln() - params.c1 * gamma_anchor;
    LogisticParams::new(params.k, params.a1, params.a2, params.c1, c2)
}
