use std::fmt;

/// What an iteration did to the optimizer state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "harness", serde(rename_all = "snake_case"))]
pub enum StepAction {
    /// Initial row, before any step.
    Start,
    SigmaDecreased,
    SigmaIncreased,
    ThresholdsTightened,
    Reset,
    Terminated,
    /// Zero smoothed gradient or flat Lipschitz average; basis redrawn, no move.
    DegenerateGradient,
    /// Baseline update without adaptation.
    Step,
}

impl StepAction {
    pub fn as_str(self) -> &'static str {
        match self {
            StepAction::Start => "start",
            StepAction::SigmaDecreased => "sigma_decreased",
            StepAction::SigmaIncreased => "sigma_increased",
            StepAction::ThresholdsTightened => "thresholds_tightened",
            StepAction::Reset => "reset",
            StepAction::Terminated => "terminated",
            StepAction::DegenerateGradient => "degenerate_gradient",
            StepAction::Step => "step",
        }
    }
}

impl fmt::Display for StepAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a per-iteration log.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
pub struct RunTrace {
    pub iteration: usize,
    pub best_value: f64,
    pub current_value: f64,
    pub sigma: f64,
    pub learning_rate: f64,
    pub cumulative_evaluations: u64,
    pub action: StepAction,
}

/// Why an optimizer stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "harness", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "harness", serde(rename_all = "snake_case"))]
pub enum Termination {
    /// Step length fell below the configured tolerance.
    Converged,
    /// A caller-supplied target value was reached.
    TargetReached,
    MaxIterationsReached,
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub evaluations: u64,
    pub termination: Termination,
    pub trace: Vec<RunTrace>,
}
