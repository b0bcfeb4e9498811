use serde::{Deserialize, Serialize};

use crate::cfront::LabelSet;
use crate::graphrep::{EDGE_KIND_COUNT, NODE_KIND_COUNT, ORDER_BUCKETS};

use super::ModelError;

/// The five binary prediction tasks; one model is trained per task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Parallel,
    Private,
    Reduction,
    Simd,
    Target,
}

impl Task {
    pub const ALL: [Task; 5] = [
        Task::Parallel,
        Task::Private,
        Task::Reduction,
        Task::Simd,
        Task::Target,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Parallel => "parallel",
            Task::Private => "private",
            Task::Reduction => "reduction",
            Task::Simd => "simd",
            Task::Target => "target",
        }
    }

    pub fn from_name(s: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.as_str() == s)
    }

    pub fn label_of(self, labels: &LabelSet) -> bool {
        match self {
            Task::Parallel => labels.parallel,
            Task::Private => labels.private,
            Task::Reduction => labels.reduction,
            Task::Simd => labels.simd,
            Task::Target => labels.target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Hidden dimension.
    pub d: usize,
    /// Attention heads; must divide `d`.
    pub heads: usize,
    /// Layer count; zero is allowed and reads the input embeddings directly.
    pub layers: usize,
    pub n_node_types: usize,
    pub n_edge_types: usize,
    pub vocab_size: usize,
    pub n_order_buckets: usize,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
    pub task: Task,
    /// Readout: mean pooling over all nodes by default. The root-node
    /// readout is available by clearing this, but with the default two
    /// layers the root's receptive field is two hops and never reaches the
    /// body tokens of a loop, which caps what the classifier can separate.
    #[serde(default = "default_mean_pool")]
    pub mean_pool: bool,
}

fn default_mean_pool() -> bool {
    true
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            d: 64,
            heads: 4,
            layers: 2,
            n_node_types: NODE_KIND_COUNT,
            n_edge_types: EDGE_KIND_COUNT,
            vocab_size: 2,
            n_order_buckets: ORDER_BUCKETS,
            lr: 1e-3,
            epochs: 100,
            seed: 42,
            task: Task::Parallel,
            mean_pool: true,
        }
    }
}

impl ModelConfig {
    pub fn head_dim(&self) -> usize {
        self.d / self.heads
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.d == 0 || self.heads == 0 {
            return Err(ModelError::Config("d and heads must be at least 1".into()));
        }
        if !self.d.is_multiple_of(self.heads) {
            return Err(ModelError::Config(format!(
                "hidden dim {} is not divisible by {} heads",
                self.d, self.heads
            )));
        }
        if self.n_node_types == 0
            || self.n_edge_types == 0
            || self.vocab_size < 2
            || self.n_order_buckets == 0
        {
            return Err(ModelError::Config(
                "type, edge, vocab and bucket counts must be positive (vocab at least 2)".into(),
            ));
        }
        Ok(())
    }
}
