use thiserror::Error;

/// Errors raised anywhere in the Satake pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SatakeError {
    /// Mismatched lengths or variable counts.
    #[error("structural error: {0}")]
    Structural(String),

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition of the elimination failed (divisibility, unit leading
    /// coefficients, palindromicity).
    #[error("elimination error: {0}")]
    Elimination(String),

    /// Supplied eigenvalues contradict each other.
    #[error("inconsistent dataset: {0}")]
    InconsistentDataset(String),

    /// Eigenvalue data that would force a vanishing Satake parameter.
    #[error("degenerate form: {0}")]
    Degenerate(String),

    /// Non-integral value where the normalization guarantees an integer.
    #[error("normalization bug: {0}")]
    Normalization(String),

    #[error("root finder failed to converge after {iterations} iterations (max correction {max_correction:e})")]
    RootFinder { iterations: usize, max_correction: f64 },

    #[error("pairing error: {0}")]
    Pairing(String),

    /// The two independent solution paths disagree.
    #[error("solver error: {0}")]
    Solver(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, SatakeError>;
