use crate::rng::Rng;

use super::adam::Adam;
use super::backward::{loss_and_grad, loss_only};
use super::config::ModelConfig;
use super::forward::prob_positive;
use super::graph_input::LabeledGraph;
use super::params::{init_params, HgtParams};
use super::ModelError;

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub batch_size: usize,
    /// Epochs without validation-loss improvement before stopping.
    pub patience: usize,
    /// Validation loss must drop by at least this much to count as an
    /// improvement; keeps microscopic drifts from resetting the patience.
    pub min_delta: f64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            batch_size: 8,
            patience: 10,
            min_delta: 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitData {
    pub train: Vec<LabeledGraph>,
    pub val: Vec<LabeledGraph>,
    pub test: Vec<LabeledGraph>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    pub val_acc: f64,
}

/// Deterministic shuffled split. Fractions apply to the item count; the
/// remainder is the training set.
pub fn split_corpus(
    mut items: Vec<LabeledGraph>,
    val_fraction: f64,
    test_fraction: f64,
    seed: u64,
) -> SplitData {
    let mut rng = Rng::derive(seed, &[0x53504c4954]);
    rng.shuffle(&mut items);
    let n = items.len();
    let n_val = (n as f64 * val_fraction).round() as usize;
    let n_test = (n as f64 * test_fraction).round() as usize;
    let test = items.split_off(n - n_test.min(n));
    let val = items.split_off(items.len() - n_val.min(items.len()));
    SplitData {
        train: items,
        val,
        test,
    }
}

pub fn mean_loss(params: &HgtParams, set: &[LabeledGraph]) -> f64 {
    if set.is_empty() {
        return 0.0;
    }
    let batch: Vec<(&super::graph_input::ModelGraph, bool)> =
        set.iter().map(|g| (&g.graph, g.label)).collect();
    loss_only(&batch, params)
}

pub fn accuracy(params: &HgtParams, set: &[LabeledGraph]) -> f64 {
    if set.is_empty() {
        return 0.0;
    }
    let correct = set
        .iter()
        .filter(|g| (prob_positive(&g.graph, params) >= 0.5) == g.label)
        .count();
    correct as f64 / set.len() as f64
}

/// Mini-batch Adam training with per-epoch shuffling and early stopping on
/// validation loss. Returns the best-validation parameters and the full
/// epoch history.
pub fn train(
    data: &SplitData,
    config: &ModelConfig,
    options: &TrainOptions,
) -> Result<(HgtParams, Vec<EpochStats>), ModelError> {
    config.validate()?;
    if data.train.is_empty() || data.val.is_empty() {
        return Err(ModelError::Config(
            "train and validation splits must be nonempty".into(),
        ));
    }
    for g in data.train.iter().chain(&data.val).chain(&data.test) {
        g.graph.validate(config)?;
    }

    let mut params = init_params(config, &mut Rng::derive(config.seed, &[0x494e_4954]))?;
    let mut adam = Adam::new(config.lr, &params);
    let mut shuffle_rng = Rng::derive(config.seed, &[0x5348_5546]);

    let mut history = Vec::new();
    let mut best = params.clone();
    let mut best_val = f64::INFINITY;
    let mut stale_epochs = 0usize;

    let mut order: Vec<usize> = (0..data.train.len()).collect();
    for epoch in 0..config.epochs {
        shuffle_rng.shuffle(&mut order);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(options.batch_size.max(1)) {
            let batch: Vec<(&super::graph_input::ModelGraph, bool)> = chunk
                .iter()
                .map(|&i| (&data.train[i].graph, data.train[i].label))
                .collect();
            let (loss, grads) = loss_and_grad(&batch, &params)?;
            adam.step(&mut params, &grads);
            epoch_loss += loss * chunk.len() as f64;
        }
        let train_loss = epoch_loss / data.train.len() as f64;
        let val_loss = mean_loss(&params, &data.val);
        let val_acc = accuracy(&params, &data.val);
        history.push(EpochStats {
            epoch,
            train_loss,
            val_loss,
            val_acc,
        });

        if val_loss < best_val - options.min_delta {
            best_val = val_loss;
            best = params.clone();
            stale_epochs = 0;
        } else {
            if val_loss < best_val {
                best_val = val_loss;
                best = params.clone();
            }
            stale_epochs += 1;
            if stale_epochs >= options.patience {
                break;
            }
        }
    }
    Ok((best, history))
}

/// CSV rendering of the history: epoch, train_loss, val_loss, val_acc.
pub fn history_csv(history: &[EpochStats]) -> String {
    let mut out = String::from("epoch,train_loss,val_loss,val_acc\n");
    for row in history {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.4}\n",
            row.epoch, row.train_loss, row.val_loss, row.val_acc
        ));
    }
    out
}
