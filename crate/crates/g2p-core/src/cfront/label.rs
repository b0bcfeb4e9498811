use serde::{Deserialize, Serialize};

use super::pragma::{Directive, Pragma};

/// Per-loop task labels. The four clause flags imply `parallel`; a loop
/// without any worksharing pragma carries all-false labels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    pub parallel: bool,
    pub private: bool,
    pub reduction: bool,
    pub simd: bool,
    pub target: bool,
}

impl LabelSet {
    pub const NON_PARALLEL: LabelSet = LabelSet {
        parallel: false,
        private: false,
        reduction: false,
        simd: false,
        target: false,
    };

    pub fn invariant_holds(&self) -> bool {
        !(self.private || self.reduction || self.simd || self.target) || self.parallel
    }
}

/// Derive labels from an attached pragma. Total: unknown shapes fall back
/// to non-parallel.
pub fn label_loop(pragma: Option<&Pragma>) -> LabelSet {
    let Some(p) = pragma else {
        return LabelSet::NON_PARALLEL;
    };
    let parallel = matches!(
        p.directive,
        Directive::OmpFor | Directive::OmpParallelFor | Directive::OmpSimd | Directive::OmpTarget
    );
    if !parallel {
        return LabelSet::NON_PARALLEL;
    }
    let in_directive = |w: &str| p.directive_words.iter().any(|x| x == w);
    LabelSet {
        parallel,
        private: p.has_clause("private"),
        reduction: p.has_clause("reduction"),
        simd: p.directive == Directive::OmpSimd
            || in_directive("simd")
            || p.any_clause_contains("simd"),
        target: p.directive == Directive::OmpTarget
            || in_directive("target")
            || p.any_clause_contains("target"),
    }
}
