use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("register of {requested} qubits exceeds the supported maximum of {max}")]
    Capacity { requested: usize, max: usize },

    #[error("invalid `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("cannot project qubit {qubit} onto outcome {outcome}: branch probability {probability:e}")]
    Projection {
        qubit: usize,
        outcome: u8,
        probability: f64,
    },

    #[error("`{quantity}` outside its domain: {reason}")]
    Domain {
        quantity: &'static str,
        reason: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(quantity: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
