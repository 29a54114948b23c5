use std::fmt;

use thiserror::Error;

/// Pipeline stage an error was raised in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Parse,
    Validate,
    NormalForm,
    Logs,
    Instance,
    Density,
    Orbit,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Parse => "parse",
            Stage::Validate => "validate",
            Stage::NormalForm => "normal-form",
            Stage::Logs => "logs",
            Stage::Instance => "instance",
            Stage::Density => "density",
            Stage::Orbit => "orbit",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("pi-power {power} outside window {lo}..={hi}")]
    WindowExceeded { power: i64, lo: i64, hi: i64 },

    #[error("value has a non-monomial denominator in pi")]
    NotPolynomial,

    #[error("invalid surd basis: {0}")]
    InvalidBasis(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema violations: {}", .0.join("; "))]
    Schema(Vec<String>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("generator {0} is not invertible")]
    NotInvertible(usize),

    #[error("generators {0} and {1} do not commute")]
    NotAbelian(usize, usize),

    #[error("log generator {index} does not exponentiate to its generator (residual {residual:e})")]
    LogMismatch { index: usize, residual: f64 },

    #[error("eigenvalue split failed: {0}")]
    EigenSplitFailure(String),

    #[error("linear parts do not commute")]
    NotCommuting,

    #[error("no separating element found within the search budget")]
    NoSeparatingElement,

    #[error("common fixed point solve failed: {0}")]
    FixedPointSolveFailure(String),

    #[error("branch failure: {0}")]
    BranchFailure(String),

    #[error("log residual too large for generator {index}: {residual:e}")]
    ResidualTooLarge { index: usize, residual: f64 },

    #[error("instance mixes exact and numeric backends")]
    MixedBackend,

    #[error("precision {0} bits is below the minimum of {1}")]
    PrecisionTooLow(usize, usize),

    #[error("not available on the exact backend: {0}")]
    NotExact(String),

    #[error("normal form check failed: {0}")]
    BadNormalForm(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("{stage}: {source}")]
    Stage { stage: Stage, source: Box<Error> },
}

impl Error {
    pub fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// The innermost error, with any stage tag removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::DivisionByZero => "DivisionByZero",
            Error::WindowExceeded { .. } => "WindowExceeded",
            Error::NotPolynomial => "NotPolynomial",
            Error::InvalidBasis(_) => "InvalidBasis",
            Error::Parse { .. } => "ParseError",
            Error::Schema(_) => "SchemaViolation",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Singular => "Singular",
            Error::NotInvertible(_) => "NotInvertible",
            Error::NotAbelian(..) => "NotAbelian",
            Error::LogMismatch { .. } => "LogMismatch",
            Error::EigenSplitFailure(_) => "EigenSplitFailure",
            Error::NotCommuting => "NotCommuting",
            Error::NoSeparatingElement => "NoSeparatingElement",
            Error::FixedPointSolveFailure(_) => "FixedPointSolveFailure",
            Error::BranchFailure(_) => "BranchFailure",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::MixedBackend => "MixedBackend",
            Error::PrecisionTooLow(..) => "PrecisionTooLow",
            Error::NotExact(_) => "NotExact",
            Error::BadNormalForm(_) => "BadNormalForm",
            Error::Numeric(_) => "Numeric",
            Error::Stage { .. } => unreachable!(),
        }
    }

    /// Input problems (as opposed to pipeline failures).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::Parse { .. }
                | Error::Schema(_)
                | Error::InvalidBasis(_)
                | Error::DimensionMismatch(_)
                | Error::NotInvertible(_)
                | Error::NotAbelian(..)
                | Error::LogMismatch { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
