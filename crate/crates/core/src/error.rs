//! Error type shared across the crate.

use alloc::string::String;

/// Errors produced by graph construction, context building, and the
/// spectral laboratory.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its documented domain.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A sparse or dense product would exceed the configured size budget.
    #[error("capacity exceeded: {what} needs {needed} but the budget is {budget}; use dense mode or a smaller graph")]
    CapacityExceeded {
        what: &'static str,
        needed: usize,
        budget: usize,
    },

    /// An iterative numerical procedure failed to converge.
    #[error("numerical failure in {what}: {reason}")]
    NumericalFailure { what: &'static str, reason: String },

    /// A precondition on caller-provided data does not hold.
    #[error("precondition violated in {what}: {reason}")]
    Precondition { what: &'static str, reason: String },

    /// A safety cap on loop rounds was reached.
    #[error("iteration cap reached in {what}: {reason}")]
    IterationCap { what: &'static str, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
