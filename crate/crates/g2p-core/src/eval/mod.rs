//! Metrics, corpus statistics, prediction reporting.

mod evaluate;
mod metrics;
mod stats;
mod suggest;

pub use evaluate::{evaluate, EvalReport, EvalRow, Scorer};
pub use metrics::{compute_metrics, ConfusionCounts, Metrics};
pub use stats::{corpus_stats, StatsRow, StatsTable};
pub use suggest::{compose_suggestion, predict, Suggestion, TaskModels};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no evaluated loops: confusion counts are all zero")]
    EmptyEvaluation,
    #[error("test set overlaps the training manifest: {0:?}")]
    TrainTestOverlap(Vec<String>),
    #[error("loop failed to parse: {0}")]
    Unparseable(String),
    #[error(transparent)]
    Model(#[from] crate::hgt::ModelError),
}
