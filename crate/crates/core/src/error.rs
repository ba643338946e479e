//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the bound, covariance and simulation machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// A profile parameter could not be calibrated (e.g. infeasible
    /// truncated-exponential delay spread).
    #[error("calibration: {0}")]
    Calibration(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    /// Carries the best estimate and the achieved error bound.
    #[error(
        "accuracy: {context}: estimate {estimate:e} with error bound {bound:e} above tolerance"
    )]
    Accuracy {
        estimate: f64,
        bound: f64,
        context: String,
    },

    /// A matrix was singular or indefinite where a positive definite one was
    /// required; reports the smallest eigenvalue seen.
    #[error("conditioning: {context} (min eigenvalue {min_eig:e})")]
    Conditioning { context: String, min_eig: f64 },

    /// An index, lag or search range was violated or exhausted.
    #[error("range: {0}")]
    Range(String),

    /// An input left the mathematical domain of an operation (nonpositive
    /// spectrum, violated series precondition, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// An input violated a documented interface contract.
    #[error("contract: {0}")]
    Contract(String),

    /// The operation is not defined for the given variant.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed configuration or file content.
    #[error("parse: {0}")]
    Parse(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Prepend a location note (SNR point, matrix entry, trial index) while
    /// keeping the error category intact.
    pub fn with_context(self, ctx: &str) -> Error {
        match self {
            Error::Calibration(m) => Error::Calibration(format!("{ctx}: {m}")),
            Error::Accuracy {
                estimate,
                bound,
                context,
            } => Error::Accuracy {
                estimate,
                bound,
                context: format!("{ctx}: {context}"),
            },
            Error::Conditioning { context, min_eig } => Error::Conditioning {
                context: format!("{ctx}: {context}"),
                min_eig,
            },
            Error::Range(m) => Error::Range(format!("{ctx}: {m}")),
            Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
            Error::Contract(m) => Error::Contract(format!("{ctx}: {m}")),
            Error::Unsupported(m) => Error::Unsupported(format!("{ctx}: {m}")),
            Error::Parse(m) => Error::Parse(format!("{ctx}: {m}")),
            Error::Io(e) => Error::Io(std::io::Error::new(e.kind(), format!("{ctx}: {e}"))),
        }
    }

    /// Stable machine-parsable category name, used in CLI error lines.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Calibration(_) => "calibration",
            Error::Accuracy { .. } => "accuracy",
            Error::Conditioning { .. } => "conditioning",
            Error::Range(_) => "range",
            Error::Domain(_) => "domain",
            Error::Contract(_) => "contract",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
