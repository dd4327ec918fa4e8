use std::fmt;

use super::RuleId;

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub stage: u8,
    pub rule: RuleId,
    /// The rewritten subformula, rendered before the rewrite.
    pub redex: String,
    /// Node count of the rewritten subformula after the step (after
    /// simplification, if enabled).
    pub result_nodes: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {} {} nodes:{} redex: {}",
            self.stage, self.rule, self.result_nodes, self.redex
        )
    }
}

/// Append-only record of the rule applications of one normalization run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    steps: Vec<TraceStep>,
}

impl RewriteTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: TraceStep) {
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn rules(&self) -> Vec<RuleId> {
        self.steps.iter().map(|s| s.rule).collect()
    }
}
