use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::hgt::{prob_positive, HgtParams, ModelGraph};

use super::metrics::{compute_metrics, ConfusionCounts, Metrics};
use super::EvalError;

/// Anything that scores a graph with a positive-class probability. Lets
/// tests drive the evaluation harness with synthetic scorers.
pub trait Scorer {
    fn prob(&self, graph: &ModelGraph) -> f64;
}

impl Scorer for HgtParams {
    fn prob(&self, graph: &ModelGraph) -> f64 {
        prob_positive(graph, self)
    }
}

impl<F: Fn(&ModelGraph) -> f64> Scorer for F {
    fn prob(&self, graph: &ModelGraph) -> f64 {
        self(graph)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub id: String,
    pub label: bool,
    pub prob: f64,
    pub predicted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub counts: ConfusionCounts,
    pub metrics: Metrics,
    pub rows: Vec<EvalRow>,
}

/// Evaluate a scorer over labeled graphs at threshold 0.5, ordered by loop
/// id. When a training manifest is supplied, any overlap with the test ids
/// is refused, naming the offending ids.
pub fn evaluate<S: Scorer>(
    scorer: &S,
    items: &[(String, bool, ModelGraph)],
    train_ids: Option<&HashSet<String>>,
) -> Result<EvalReport, EvalError> {
    if let Some(train) = train_ids {
        let mut overlap: Vec<String> = items
            .iter()
            .filter(|(id, _, _)| train.contains(id))
            .map(|(id, _, _)| id.clone())
            .collect();
        if !overlap.is_empty() {
            overlap.sort();
            return Err(EvalError::TrainTestOverlap(overlap));
        }
    }

    let mut ordered: Vec<&(String, bool, ModelGraph)> = items.iter().collect();
    ordered.sort_by(|a, b| a.0.cmp(&b.0));

    let mut counts = ConfusionCounts::default();
    let mut rows = Vec::with_capacity(ordered.len());
    for (id, label, graph) in ordered {
        let prob = scorer.prob(graph);
        let predicted = prob >= 0.5;
        counts.record(*label, predicted);
        rows.push(EvalRow {
            id: id.clone(),
            label: *label,
            prob,
            predicted,
        });
    }
    let metrics = compute_metrics(&counts)?;
    Ok(EvalReport {
        counts,
        metrics,
        rows,
    })
}

impl EvalReport {
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("id,label,prob,predicted\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.6},{}\n",
                r.id, r.label as u8, r.prob, r.predicted as u8
            ));
        }
        out
    }

    pub fn render_text(&self) -> String {
        let [p, r, f1, acc] = self.metrics.as_percent_row();
        format!(
            "TP {} TN {} FP {} FN {} | precision {:.2} recall {:.2} F1 {:.2} accuracy {:.2}\n",
            self.counts.tp, self.counts.tn, self.counts.fp, self.counts.fn_, p, r, f1, acc
        )
    }
}
