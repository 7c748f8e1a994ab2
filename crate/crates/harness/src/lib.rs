//! Problem registry, experiment driver, metrics, certificate orchestration,
//! and the command-line interface.
//!
//! A run is: solve the reference problem, split the frames at the training
//! cutoff, train each architecture on the leading window, infer the
//! remaining frames on the reference grid, compute normalized metrics,
//! classify the problem's smoothness, emit bound and solver-property
//! certificates, and replay every certificate through the independent
//! checker. Runs are sequential and deterministic per seed.

pub mod cli;
pub mod experiment;
pub mod metrics;
pub mod oracles;
pub mod registry;
pub mod tables;

pub use experiment::{
    arch_id, check_certificates, component_names, run_experiment, write_bundle, ArchResult,
    ExperimentBundle, RunOverrides,
};
pub use metrics::{compute_metrics, raw_l_inf_all, MetricsRow};
pub use registry::{find, registry, scaled, ProblemSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Pde(#[from] pde_core::PdeError),
    #[error(transparent)]
    Solver(#[from] fv_solver::SolverError),
    #[error(transparent)]
    Characteristics(#[from] characteristics::CharError),
    #[error(transparent)]
    Neural(#[from] neural::NeuralError),
    #[error(transparent)]
    Certifier(#[from] certifier::CertError),
    #[error(transparent)]
    Prover(#[from] prover::ProverError),
    #[error("metrics error: {0}")]
    Metrics(String),
    #[error("stage failed: {0}")]
    Stage(String),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad argument: {0}")]
    BadArgument(String),
}
