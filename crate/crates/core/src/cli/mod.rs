//! Batch front end: job validation, dispatch and report serialization.
//!
//! Exit codes: 0 success, 2 input error, 3 precondition error, 4 internal
//! limit exceeded. Tameness verdicts are data in the report, never exit codes.

mod input;
mod job;
mod report;
mod run;

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::sidon::SidonError;
use crate::tameness::TamenessError;

pub use input::{parse_input, Angle, Claim, MapSpec};
pub use job::{CommandKind, JobSpec, Options, Range, SidonSource};
pub use report::{
    emit, CertifyResult, ErrorInfo, Format, FrequencyApprox, FrequencyExact, FrequencyResult, Report, ResultBody,
    SidonApprox, SidonExact, SidonResult, SimulateApprox, SimulateExact, SimulateResult, ToolInfo,
};
pub use run::run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("non-integer matrix entry: {0}")]
    NonInteger(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("cannot read input: {0}")]
    Io(String),
    #[error("cascade undefined: determinant {det} is not +1 or -1")]
    DeterminantNotUnit { det: String },
    #[error("{0}")]
    StreamExhausted(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
}

impl CliError {
    /// Stable class name used in error reports.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Malformed(_) => "MALFORMED",
            CliError::Dimension(_) => "DIMENSION",
            CliError::NonInteger(_) => "NONINTEGER",
            CliError::InvalidOption(_) => "INVALID_OPTION",
            CliError::Io(_) => "IO",
            CliError::DeterminantNotUnit { .. } => "DETERMINANT_NOT_UNIT",
            CliError::StreamExhausted(_) => "STREAM_EXHAUSTED",
            CliError::LimitExceeded(_) => "LIMIT_EXCEEDED",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_)
            | CliError::Dimension(_)
            | CliError::NonInteger(_)
            | CliError::InvalidOption(_)
            | CliError::Io(_) => EXIT_INPUT,
            CliError::DeterminantNotUnit { .. } => EXIT_PRECONDITION,
            CliError::StreamExhausted(_) | CliError::LimitExceeded(_) => EXIT_LIMIT,
        }
    }
}

impl From<TamenessError> for CliError {
    fn from(e: TamenessError) -> Self {
        match e {
            TamenessError::DeterminantNotUnit { det } => CliError::DeterminantNotUnit { det: det.to_string() },
            TamenessError::SweepTooLarge { .. } => CliError::LimitExceeded(e.to_string()),
            TamenessError::ZeroConstantTerm => CliError::InvalidOption(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            DynamicsError::InvalidArgument(m) => CliError::InvalidOption(m),
            DynamicsError::CapExceeded { .. } => CliError::LimitExceeded(e.to_string()),
        }
    }
}

impl From<SidonError> for CliError {
    fn from(e: SidonError) -> Self {
        match e {
            SidonError::StreamExhausted { .. } => CliError::StreamExhausted(e.to_string()),
            SidonError::CapExceeded { .. } => CliError::LimitExceeded(e.to_string()),
            SidonError::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            SidonError::Parse { .. } | SidonError::Empty => CliError::Malformed(e.to_string()),
            SidonError::NotDistinct | SidonError::InvalidArgument(_) => CliError::InvalidOption(e.to_string()),
        }
    }
}
