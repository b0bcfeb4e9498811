//! Heterogeneous graph transformer over augmented-AST graphs.
//!
//! Every node type routes through its own key/query/value/output projections
//! and every edge type carries its own attention and message matrices plus a
//! learned scalar prior. One layer computes, per target node, a per-head
//! softmax over incoming edges of bilinear key/query scores, aggregates the
//! per-head messages under those weights, and applies a type-specific output
//! projection with a GELU and a residual connection. The readout is the
//! final-layer state of the loop's root node feeding a two-way classifier.
//!
//! Parameters are stored as little-endian `f32` tensors (the checkpoint
//! format); all arithmetic runs in `f64`, which keeps finite-difference
//! gradient checks meaningful and training numerically stable.

mod adam;
mod backward;
mod checkpoint;
mod config;
mod forward;
mod gradcheck;
mod graph_input;
mod params;
mod train;

pub use adam::Adam;
pub use backward::{loss_and_grad, loss_only, Grads};
pub use checkpoint::{load_checkpoint, save_checkpoint, CHECKPOINT_MAGIC};
pub use config::{ModelConfig, Task};
pub use forward::{forward, logits, prob_positive, ForwardCache, LayerCache};
pub use gradcheck::{grad_check, GradCheckReport};
pub use graph_input::{model_graph_from_record, LabeledGraph, ModelGraph};
pub use params::{init_params, param_count, tensor_specs, HgtParams, Tensor};
pub use train::{
    accuracy, history_csv, mean_loss, split_corpus, train, EpochStats, SplitData, TrainOptions,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model configuration: {0}")]
    Config(String),
    #[error("graph does not match model configuration: {0}")]
    GraphMismatch(String),
    #[error("loss became non-finite: {0}")]
    NanLoss(String),
    #[error("checkpoint error at {path}: {reason}")]
    Checkpoint { path: String, reason: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}
