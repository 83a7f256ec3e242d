use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("shape must contain at least one factor and every size must be >= 1")]
    EmptyShape,

    #[error("polynomial of degree {degree} does not fit in a space of dimension {ambient}")]
    Overflow { degree: usize, ambient: usize },

    /// `terms` is `None` when the count does not even fit in 128 bits.
    #[error("term budget exceeded: {} terms requested, budget is {budget}", fmt_terms(*.terms))]
    BudgetExceeded { terms: Option<u128>, budget: u64 },

    #[error("search budget exceeded after {nodes} nodes")]
    SearchBudgetExceeded { nodes: u64 },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("invalid latin square: {0}")]
    InvalidLatinSquare(String),

    #[error("choice carries {got} edge bits but the instance has {expected} edges")]
    BitCountMismatch { got: usize, expected: usize },

    #[error("no nonsingular sample found after {0} attempts")]
    SamplingExhausted(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn fmt_terms(terms: Option<u128>) -> String {
    match terms {
        Some(t) => t.to_string(),
        None => "more than 2^128".to_string(),
    }
}
