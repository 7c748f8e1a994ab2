//! Equational proof engine over symbolic expressions: simplification to
//! normal form through a terminating rewrite system, symbolic
//! differentiation, one-sided limits, solver-property proofs, and an
//! independent certificate checker.
//!
//! Two expressions are provably equal when their rewriting sequences
//! terminate at the same normal form; the recorded sequence is the proof.
//! Rules are sound over the reals under their side conditions; a certificate
//! consumer should note that floating-point execution of the certified
//! formulas may deviate within rounding.

mod certificate;
mod checker;
mod diff;
mod expr;
mod limit;
mod parse;
mod rules;
mod simplify;
mod solver_props;

pub use certificate::{
    proof_certificate_from_json, proof_certificate_to_json, prove_equal, rat, Claim, GoalSide,
    ProofCertificate, ProofStatus, ProofStep, Relation,
};
pub use checker::{check_certificate_json, check_proof_certificate};
pub use diff::diff;
pub use expr::{canonical_cmp, Assumptions, Cmp, Cond, Expr, Op, Predicate};
pub use limit::{limit, LimitResult, Side};
pub use parse::{parse, print};
pub use rules::{apply_named, rule_table, RewriteRule};
pub use simplify::{simplify, simplify_traced, TraceStep, DEFAULT_STEP_LIMIT};
pub use solver_props::{
    cfl_certificate, flux_continuity_certificates, hyperbolicity_certificate,
    limiter_certificates, prove_solver_properties, SchemeFlux,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("step limit {0} exceeded (non-termination suspected)")]
    StepLimit(usize),
    #[error("not differentiable: {0}")]
    NotDifferentiable(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("check failed at step {step}: {reason}")]
    CheckFailed { step: usize, reason: String },
}
