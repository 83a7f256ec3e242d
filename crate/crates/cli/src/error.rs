use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] detsum::Error),
}

impl CliError {
    /// 2 for bad input, 3 for exhausted budgets.
    pub fn exit_code(&self) -> i32 {
        use detsum::Error::*;
        match self {
            CliError::Input(_) => 2,
            CliError::Core(BudgetExceeded { .. } | SearchBudgetExceeded { .. } | SamplingExhausted(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}
