use serde::{Deserialize, Serialize};

use crate::cfront::LoopRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub category: String,
    pub loops: u64,
    pub function_calls: u64,
    pub nested: u64,
    /// Mean lines of code, rounded to two decimals.
    pub avg_loc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsTable {
    pub rows: Vec<StatsRow>,
}

type CategorySelector = fn(&LoopRecord) -> bool;

/// Per-category corpus statistics: loop count, loops containing function
/// calls, nested loops, and average LOC. Categories are the four clause
/// labels, the parallel aggregate, and non-parallel; a loop counts toward
/// every clause category it carries.
pub fn corpus_stats(corpus: &[LoopRecord]) -> StatsTable {
    let categories: [(&str, CategorySelector); 6] = [
        ("private", |r| r.labels.private),
        ("reduction", |r| r.labels.reduction),
        ("simd", |r| r.labels.simd),
        ("target", |r| r.labels.target),
        ("parallel", |r| r.labels.parallel),
        ("non_parallel", |r| !r.labels.parallel),
    ];
    let rows = categories
        .iter()
        .map(|(name, select)| {
            let members: Vec<&LoopRecord> = corpus.iter().filter(|r| select(r)).collect();
            let loops = members.len() as u64;
            let avg = if members.is_empty() {
                0.0
            } else {
                let total: u64 = members.iter().map(|r| r.loc as u64).sum();
                (total as f64 / members.len() as f64 * 100.0).round() / 100.0
            };
            StatsRow {
                category: name.to_string(),
                loops,
                function_calls: members.iter().filter(|r| r.has_function_call).count() as u64,
                nested: members.iter().filter(|r| r.is_nested).count() as u64,
                avg_loc: avg,
            }
        })
        .collect();
    StatsTable { rows }
}

impl StatsTable {
    pub fn row(&self, category: &str) -> Option<&StatsRow> {
        self.rows.iter().find(|r| r.category == category)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<14} {:>8} {:>15} {:>8} {:>9}\n",
            "category", "loops", "function_calls", "nested", "avg_loc"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<14} {:>8} {:>15} {:>8} {:>9.2}\n",
                r.category, r.loops, r.function_calls, r.nested, r.avg_loc
            ));
        }
        out
    }
}
