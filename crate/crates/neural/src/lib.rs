//! From-scratch shallow MLPs with exact backpropagation, deterministic
//! full-batch gradient descent, PDE-residual losses in conservation form,
//! compositional layer-by-layer training, and a plain deep baseline.
//!
//! Training owns its network exclusively and accumulates batch gradients in
//! a fixed order, so identical seed + config + data give bit-identical
//! parameters. Inference on a trained network is pure.

mod checkpoint;
mod deepnet;
mod loss;
mod mlp;
mod train;

pub use checkpoint::{checkpoint_to_string, load_checkpoint, parse_checkpoint, save_checkpoint};
pub use deepnet::{infer, AnalyticMap, BeaconsNet, DeepNet, PlainNet};
pub use loss::{check_psd, loss_and_grad_residual, loss_and_grad_supervised, ResidualWeights};
pub use mlp::{InputNorm, Mlp};
pub use train::{
    train_beacons, train_mlp_supervised, train_plain, unnormalize_from_targets, BeaconsSpec,
    TrainConfig, TrainReport,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NeuralError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("weight matrix rejected: {0}")]
    BadWeightMatrix(String),
    #[error("bad training configuration: {0}")]
    BadConfig(String),
    #[error("training diverged: {0}")]
    Diverged(String),
    #[error("inverse-map domain violation: {0}")]
    InverseDomain(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("malformed checkpoint: {0}")]
    Malformed(String),
}
