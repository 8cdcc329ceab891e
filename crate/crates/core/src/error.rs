use thiserror::Error;

/// Errors raised while reading or checking a scheduling instance.
#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("window #{window} references undeclared {kind} `{id}`")]
    UnknownReference {
        window: usize,
        kind: &'static str,
        id: String,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("invalid {what}: {detail}")]
    Invariant { what: String, detail: String },
}

impl InstanceError {
    pub(crate) fn invariant(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::Invariant {
            what: what.into(),
            detail: detail.into(),
        }
    }
}

/// Errors from the linear model writers, readers and evaluator.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("name `{0}` cannot be written in LP format")]
    ForbiddenName(String),
    #[error("assignment has no value for variable `{0}`")]
    MissingValue(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Errors from the model builders.
#[derive(Debug, Error)]
pub enum FormulationError {
    #[error("preprocessing result does not match the instance: {0}")]
    PrepMismatch(String),
    #[error("instance is not normalized (period must begin at 0)")]
    NotNormalized,
    #[error("windows belong to the same mission `{0}`")]
    SameMission(String),
    #[error("identifiers produce the variable name `{0}` twice")]
    NameClash(String),
}

/// Errors from the solvers.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("instance too large for exhaustive search: {missions} missions, {windows} windows (limit 10/20)")]
    TooLarge { missions: usize, windows: usize },
    #[error("inconsistent preprocessing result: {0}")]
    InconsistentPrep(String),
}
