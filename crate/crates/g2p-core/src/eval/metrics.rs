use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, tn: u64, fp: u64, fn_: u64) -> ConfusionCounts {
        ConfusionCounts { tp, tn, fp, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn record(&mut self, label: bool, predicted: bool) {
        match (label, predicted) {
            (true, true) => self.tp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
}

/// Precision, recall, F1 and accuracy from confusion counts.
/// Zero-denominator precision and recall are defined as 0, so F1 is 0 too;
/// that only happens when tp is 0.
pub fn compute_metrics(c: &ConfusionCounts) -> Result<Metrics, EvalError> {
    if c.total() == 0 {
        return Err(EvalError::EmptyEvaluation);
    }
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    let accuracy = (c.tp + c.tn) as f64 / c.total() as f64;
    Ok(Metrics {
        precision,
        recall,
        f1,
        accuracy,
    })
}

impl Metrics {
    /// Percent with two decimals, e.g. 39.51.
    pub fn as_percent_row(&self) -> [f64; 4] {
        let pct = |v: f64| (v * 10000.0).round() / 100.0;
        [
            pct(self.precision),
            pct(self.recall),
            pct(self.f1),
            pct(self.accuracy),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(c: ConfusionCounts, expected: [f64; 4]) {
        let m = compute_metrics(&c).unwrap();
        let row = m.as_percent_row();
        for (got, want) in row.iter().zip(expected.iter()) {
            assert!(
                (got - want).abs() <= 0.5 + 1e-9,
                "counts {c:?}: got {row:?}, want {expected:?}"
            );
            // Tighter: the published numbers match to the printed precision.
            assert!(
                (got - want).abs() < 0.005 + 1e-9,
                "counts {c:?}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn conservative_static_tool_row() {
        check(
            ConfusionCounts::new(1593, 0, 0, 2439),
            [100.00, 39.51, 56.64, 39.51],
        );
    }

    #[test]
    fn model_vs_static_tool_row() {
        check(
            ConfusionCounts::new(2860, 617, 356, 199),
            [88.93, 93.49, 91.16, 86.24],
        );
    }

    #[test]
    fn perfect_classifier() {
        let m = compute_metrics(&ConfusionCounts::new(5, 5, 0, 0)).unwrap();
        assert_eq!(m.precision, 1.0);
        assert_eq!(m.recall, 1.0);
        assert_eq!(m.f1, 1.0);
        assert_eq!(m.accuracy, 1.0);
    }

    #[test]
    fn zero_total_is_an_error() {
        assert!(compute_metrics(&ConfusionCounts::default()).is_err());
    }

    #[test]
    fn zero_denominators_yield_zero() {
        // No positives predicted and none present: precision = recall = 0.
        let m = compute_metrics(&ConfusionCounts::new(0, 10, 0, 0)).unwrap();
        assert_eq!(m.precision, 0.0);
        assert_eq!(m.recall, 0.0);
        assert_eq!(m.f1, 0.0);
        assert_eq!(m.accuracy, 1.0);
    }

    #[test]
    fn counts_total_and_record() {
        let mut c = ConfusionCounts::default();
        c.record(true, true);
        c.record(false, true);
        c.record(true, false);
        c.record(false, false);
        assert_eq!((c.tp, c.fp, c.fn_, c.tn), (1, 1, 1, 1));
        assert_eq!(c.total(), 4);
    }

    #[test]
    fn fn_field_serializes_as_fn() {
        let c = ConfusionCounts::new(1, 2, 3, 4);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"fn\":4"));
        let back: ConfusionCounts = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
