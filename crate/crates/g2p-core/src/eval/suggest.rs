use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cfront::tokenize;
use crate::graphrep::{encode_features, loop_to_graph, Vocab};
use crate::hgt::{prob_positive, HgtParams, ModelGraph, Task};

use super::EvalError;

/// A per-loop prediction with an optional composed pragma. The pragma is
/// present exactly when the parallel probability reaches 0.5 and only
/// mentions clauses whose own probability reaches 0.5. Clause arguments are
/// `?` placeholders: the models predict categories, not operands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suggestion {
    pub loop_id: String,
    pub parallel_prob: f64,
    pub clause_probs: BTreeMap<String, f64>,
    pub suggested_pragma: Option<String>,
}

/// One trained model per task.
pub struct TaskModels {
    pub models: BTreeMap<&'static str, HgtParams>,
}

impl TaskModels {
    pub fn get(&self, task: Task) -> Option<&HgtParams> {
        self.models.get(task.as_str())
    }
}

const THRESHOLD: f64 = 0.5;

/// Pure composition rule from per-task probabilities.
pub fn compose_suggestion(
    loop_id: &str,
    parallel_prob: f64,
    clause_probs: BTreeMap<String, f64>,
) -> Suggestion {
    let prob = |name: &str| clause_probs.get(name).copied().unwrap_or(0.0);
    let suggested_pragma = if parallel_prob >= THRESHOLD {
        let mut pragma = String::from("#pragma omp ");
        if prob("target") >= THRESHOLD {
            pragma.push_str("target ");
        }
        pragma.push_str("parallel for");
        if prob("simd") >= THRESHOLD {
            pragma.push_str(" simd");
        }
        if prob("private") >= THRESHOLD {
            pragma.push_str(" private(?)");
        }
        if prob("reduction") >= THRESHOLD {
            pragma.push_str(" reduction(?:?)");
        }
        Some(pragma)
    } else {
        None
    };
    Suggestion {
        loop_id: loop_id.to_string(),
        parallel_prob,
        clause_probs,
        suggested_pragma,
    }
}

/// Run all loaded task models on one loop and compose the suggestion.
pub fn predict(
    models: &TaskModels,
    vocab: &Vocab,
    loop_id: &str,
    loop_source: &str,
) -> Result<Suggestion, EvalError> {
    let tokens =
        tokenize(loop_source).map_err(|e| EvalError::Unparseable(format!("{loop_id}: {e}")))?;
    let graph =
        loop_to_graph(&tokens).map_err(|e| EvalError::Unparseable(format!("{loop_id}: {e}")))?;
    let featurized = encode_features(graph, vocab);
    let model_graph = ModelGraph::from(&featurized);

    let prob_for = |task: Task| -> Result<Option<f64>, EvalError> {
        match models.get(task) {
            None => Ok(None),
            Some(params) => {
                model_graph.validate(&params.config)?;
                Ok(Some(prob_positive(&model_graph, params)))
            }
        }
    };

    let parallel_prob = prob_for(Task::Parallel)?.unwrap_or(0.0);
    let mut clause_probs = BTreeMap::new();
    for task in [Task::Private, Task::Reduction, Task::Simd, Task::Target] {
        if let Some(p) = prob_for(task)? {
            clause_probs.insert(task.as_str().to_string(), p);
        }
    }
    Ok(compose_suggestion(loop_id, parallel_prob, clause_probs))
}
