//! Error type shared by every layer of the library.
//!
//! Each variant maps to a coarse [`ErrorCategory`], which the CLI turns into
//! its process exit code and the C ABI turns into a status code.

use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Machine-readable error classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorCategory {
    /// Scenario text could not be read as a valid document.
    Parse,
    /// The optimisation problem is ill-posed or evaluated outside its domain.
    Solver,
    /// A numerical procedure failed to reach its tolerance.
    Numerical,
    /// Invalid construction parameters passed through the library API.
    Config,
    Io,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Parse => "parse",
            ErrorCategory::Solver => "solver",
            ErrorCategory::Numerical => "numerical",
            ErrorCategory::Config => "config",
            ErrorCategory::Io => "io",
        }
    }

    /// Process exit code used by the `mixrisk` binary.
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Parse | ErrorCategory::Config => 2,
            ErrorCategory::Solver => 3,
            ErrorCategory::Numerical => 4,
            ErrorCategory::Io => 1,
        }
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which stage of scenario-file ingestion rejected the document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseStage {
    Syntax,
    Schema,
    Semantic,
}

impl fmt::Display for ParseStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseStage::Syntax => "syntax",
            ParseStage::Schema => "schema",
            ParseStage::Semantic => "semantic",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{context}: quadrature did not converge (estimated error {estimate:.3e}, tolerance {tolerance:.3e})")]
    Quadrature {
        context: String,
        estimate: f64,
        tolerance: f64,
    },

    #[error("root finding did not converge after {iterations} iterations (residual {residual:.3e})")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error(
        "no interior optimum on [{lo}, {hi}]: marginal lifetime utility is {} at the lower bound and {} at the upper bound",
        sign_word(*d_lo),
        sign_word(*d_hi)
    )]
    NoInteriorOptimum {
        lo: f64,
        hi: f64,
        d_lo: f64,
        d_hi: f64,
    },

    #[error("model assumption violated: {0}")]
    ModelAssumption(String),

    #[error("{stage} error at {path}: {message}")]
    Parse {
        stage: ParseStage,
        /// Key path (`income_risk.c`) or `line:column` for syntax errors.
        path: String,
        message: String,
    },

    #[error("situation {situation}: {source}")]
    Situation {
        situation: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn sign_word(v: f64) -> &'static str {
    if v > 0.0 {
        "positive"
    } else if v < 0.0 {
        "negative"
    } else {
        "zero"
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Domain(_)
            | Error::NoInteriorOptimum { .. }
            | Error::ModelAssumption(_)
            | Error::Unsupported(_) => ErrorCategory::Solver,
            Error::Config(_) => ErrorCategory::Config,
            Error::Quadrature { .. } | Error::RootNotConverged { .. } => ErrorCategory::Numerical,
            Error::Parse { .. } => ErrorCategory::Parse,
            Error::Situation { source, .. } => source.category(),
            Error::Io { .. } => ErrorCategory::Io,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn in_situation(self, situation: &'static str) -> Self {
        Error::Situation {
            situation,
            source: Box::new(self),
        }
    }
}
