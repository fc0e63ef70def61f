//! Semantics-empowered two-user uplink NOMA toolkit.
//!
//! A secondary far user shares a primary near user's uplink resource block via
//! NOMA and may transmit either semantic symbols (SemCom) or conventional bits
//! (BitCom). This crate provides:
//!
//! - the generalized-logistic semantic-similarity surrogate and the effective /
//!   equivalent semantic rate models ([`semantic`]),
//! - path loss, seeded Rayleigh fading draws, and the instantaneous NOMA rates
//!   at a fading state ([`link`]),
//! - the semantic-versus-bit rate-region boundary for the static channel
//!   ([`region`]),
//! - optimal opportunistic policies over fading states for on-off resource
//!   management (single-multiplier bisection dual, [`onoff`]) and continuous
//!   resource management (two-multiplier ellipsoid dual plus LP primal
//!   recovery, [`continuous`]),
//! - baseline/variant schemes, policy evaluation, and a brute-force oracle
//!   that certifies the solvers at desk scale ([`schemes`], [`oracle`]),
//! - figure-data sweeps emitting CSV rows ([`figures`]).
//!
//! All solvers operate on an immutable, seeded sequence of fading states, so
//! every result is deterministic for a fixed seed and configuration.

pub mod continuous;
pub mod csvfmt;
pub mod figures;
pub mod link;
pub mod lp;
pub mod onoff;
pub mod oracle;
pub mod region;
pub mod schemes;
pub mod search;
pub mod semantic;

pub use link::{FadingState, LinkGeometry, PolicyDecision, SystemParams};
pub use semantic::{BitComProfile, LogisticParams, SemComProfile};

/// Errors produced by parameter validation and the solvers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("calibration error: {0}")]
    Calibration(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
