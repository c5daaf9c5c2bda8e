use thiserror::Error;

/// Every failure the library can report. Variant names are stable and are
/// what the CLI prints on a numerical failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("PoleError: {0}")]
    PoleError(String),
    #[error("NoConvergence: {0}")]
    NoConvergence(String),
    #[error("OverflowGuard: {0}")]
    OverflowGuard(String),
    #[error("BranchError: {0}")]
    BranchError(String),
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("MaxDepthExceeded: best estimate {estimate:e} with error {abs_error:e}")]
    MaxDepthExceeded { estimate: f64, abs_error: f64 },
    #[error("NonFiniteIntegrand: at x = {0}")]
    NonFiniteIntegrand(f64),
    #[error("TailNotDecaying: {0}")]
    TailNotDecaying(String),
    #[error("AccelerationStalled: {0}")]
    AccelerationStalled(String),
    #[error("SingularAngle: {0}")]
    SingularAngle(String),
    #[error("CoincidentDirections: cos(theta) = 1")]
    CoincidentDirections,
    #[error("DegenerateCompensation: Z1 - K*Z2 = {0}")]
    DegenerateCompensation(f64),
    #[error("IntegrandUnderflow: {0}")]
    IntegrandUnderflow(String),
    #[error("UnknownStrategy: no {kind} named '{name}'")]
    UnknownStrategy { kind: &'static str, name: String },
}

impl Error {
    /// Short name of the variant, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::PoleError(_) => "PoleError",
            Error::NoConvergence(_) => "NoConvergence",
            Error::OverflowGuard(_) => "OverflowGuard",
            Error::BranchError(_) => "BranchError",
            Error::DomainError(_) => "DomainError",
            Error::MaxDepthExceeded { .. } => "MaxDepthExceeded",
            Error::NonFiniteIntegrand(_) => "NonFiniteIntegrand",
            Error::TailNotDecaying(_) => "TailNotDecaying",
            Error::AccelerationStalled(_) => "AccelerationStalled",
            Error::SingularAngle(_) => "SingularAngle",
            Error::CoincidentDirections => "CoincidentDirections",
            Error::DegenerateCompensation(_) => "DegenerateCompensation",
            Error::IntegrandUnderflow(_) => "IntegrandUnderflow",
            Error::UnknownStrategy { .. } => "UnknownStrategy",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
