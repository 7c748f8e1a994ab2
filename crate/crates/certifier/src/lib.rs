//! Worst-case L-inf bound certificates for neural PDE approximators.
//!
//! The shallow rate comes from the single-hidden-layer approximation theorem
//! for C^n targets; the composition rule e_f + L e_g folds per-stage rates
//! and Lipschitz constants through a compositional architecture; and the
//! candidate search trials analytic suppression maps until the estimated
//! trained-error growth is minimized. Certificates carry an arithmetic
//! derivation that an independent checker replays bit-exactly.
//!
//! Bounds are approximation-theoretic existence bounds; certifying training
//! convergence is out of scope.

mod candidates;
mod certify;
mod chain;
mod json;
mod rates;

pub use candidates::{candidate_search, CandidateReport, CandidateTrial};
pub use certify::{
    certify, replay_bound_certificate, ArchKind, ArchitectureSpec, BoundCertificate,
    DerivationStep, Operand, ProblemInfo, Rule,
};
pub use chain::{chain_bound, CompositionChain, NonSmoothBound, Stage};
pub use json::{bound_certificate_from_json, bound_certificate_to_json};
pub use rates::{compose_bound, shallow_rate};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("bad composition chain: {0}")]
    BadChain(String),
    #[error("certificate replay failed at step {step}: {reason}")]
    ReplayFailed { step: usize, reason: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
}
