//! Baseline and resource-management schemes plus policy evaluation.
//!
//! A scheme restricts the opportunistic solver along three axes: the
//! communication method (free, SemCom-only, BitCom-only), the power control
//! (continuous or on-off), and the time scheduling (continuous or on-off).
//! On-off power with on-off time and no average-power constraint is the
//! on-off scenario solver; everything else runs through the continuous
//! machinery with the feasible set restricted inside the per-state
//! subproblems.

use crate::continuous::{solve_restricted as solve_continuous, ContinuousConfig, ContinuousSolution};
use crate::link::{f_user_semantic_rate, n_user_bit_rate, FadingState, PolicyDecision, SystemParams};
use crate::onoff::{solve_restricted as solve_onoff, OnOffConfig, OnOffSolution};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModePolicy {
    Opportunistic,
    SemComOnly,
    BitComOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerPolicy {
    Continuous,
    OnOff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimePolicy {
    Continuous,
    OnOff,
}

/// One scheme: a point in the mode × power × time restriction lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeId {
    pub mode_policy: ModePolicy,
    pub power_policy: PowerPolicy,
    pub time_policy: TimePolicy,
}

impl SchemeId {
    pub fn unrestricted() -> Self {
        Self {
            mode_policy: ModePolicy::Opportunistic,
            power_policy: PowerPolicy::Continuous,
            time_policy: TimePolicy::Continuous,
        }
    }

    pub fn label(&self) -> String {
        let mode = match self.mode_policy {
            ModePolicy::Opportunistic => "opportunistic",
            ModePolicy::SemComOnly => "semcom_only",
            ModePolicy::BitComOnly => "bitcom_only",
        };
        let pc = match self.power_policy {
            PowerPolicy::Continuous => "cpc",
            PowerPolicy::OnOff => "opc",
        };
        let ts = match self.time_policy {
            TimePolicy::Continuous => "cts",
            TimePolicy::OnOff => "ots",
        };
        format!("{mode}_{pc}_{ts}")
    }
}

/// Scenario-specific configuration for a scheme run.
#[derive(Debug, Clone, Copy)]
pub enum SchemeConfig {
    /// On-off power and time without an average-power constraint.
    OnOff(OnOffConfig),
    /// Continuous machinery (also hosts the on-off variants under the APC).
    Continuous(ContinuousConfig),
}

#[derive(Debug, Clone)]
pub enum SchemeSolution {
    OnOff(OnOffSolution),
    Continuous(ContinuousSolution),
}

impl SchemeSolution {
    pub fn decisions(&self) -> &[PolicyDecision] {
        match self {
            SchemeSolution::OnOff(s) => &s.decisions,
            SchemeSolution::Continuous(s) => &s.decisions,
        }
    }

    pub fn ergodic_s(&self) -> f64 {
        match self {
            SchemeSolution::OnOff(s) => s.ergodic_s,
            SchemeSolution::Continuous(s) => s.ergodic_s,
        }
    }
}

/// Sample-average metrics of a policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub ergodic_s: f64,
    pub ergodic_r: f64,
    pub avg_power: f64,
    /// Average of (1 − α): silent mass.
    pub time_off: f64,
    /// Average of α over BitCom states.
    pub time_bitcom: f64,
    /// Average of α over SemCom states.
    pub time_semcom: f64,
}

/// Evaluate a policy state by state.
pub fn evaluate_policy(
    decisions: &[PolicyDecision],
    states: &[FadingState],
    params: &SystemParams,
) -> Result<EvalResult> {
    if decisions.len() != states.len() {
        return Err(Error::Argument(format!(
            "evaluate_policy: {} decisions for {} states",
            decisions.len(),
            states.len()
        )));
    }
    if states.is_empty() {
        return Err(Error::Argument("evaluate_policy: no states".into()));
    }
    let mut sum_s = 0.0;
    let mut sum_r = 0.0;
    let mut sum_q = 0.0;
    let mut off = 0.0;
    let mut bit = 0.0;
    let mut sem = 0.0;
    for (dec, st) in decisions.iter().zip(states) {
        sum_s += f_user_semantic_rate(dec, st, params);
        sum_r += n_user_bit_rate(dec.alpha, dec.power, st, params);
        sum_q += dec.alpha * dec.power;
        off += 1.0 - dec.alpha;
        if dec.use_semcom {
            sem += dec.alpha;
        } else {
            bit += dec.alpha;
        }
    }
    let n = states.len() as f64;
    Ok(EvalResult {
        ergodic_s: sum_s / n,
        ergodic_r: sum_r / n,
        avg_power: sum_q / n,
        time_off: off / n,
        time_bitcom: bit / n,
        time_semcom: sem / n,
    })
}

/// Solve one scheme on a shared state sequence.
pub fn solve_scheme(
    scheme: &SchemeId,
    states: &[FadingState],
    cfg: &SchemeConfig,
    params: &SystemParams,
) -> Result<(SchemeSolution, EvalResult)> {
    let solution = match cfg {
        SchemeConfig::OnOff(c) => {
            if scheme.power_policy != PowerPolicy::OnOff
                || scheme.time_policy != TimePolicy::OnOff
            {
                return Err(Error::Argument(
                    "scheme: an on-off config requires on-off power and time policies".into(),
                ));
            }
            SchemeSolution::OnOff(solve_onoff(states, c, params, scheme.mode_policy)?)
        }
        SchemeConfig::Continuous(c) => {
            SchemeSolution::Continuous(solve_continuous(states, c, params, scheme)?)
        }
    };
    let eval = evaluate_policy(solution.decisions(), states, params)?;
    Ok((solution, eval))
}
