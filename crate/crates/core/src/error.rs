use thiserror::Error;

/// Failure modes shared by the series engine, the difference operators and
/// the growth models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series does not converge: {0}")]
    NonConvergent(String),

    #[error("no usable Abel radius: {0}")]
    RadiusInfeasible(String),

    #[error("extrapolation to r = 1 is unstable: {0}")]
    ExtrapolationUnstable(String),

    #[error("trigonometric rate {rate} with step {step} violates |rate|*T < pi")]
    AliasingBound { rate: f64, step: f64 },

    #[error("difference order {0} is not supported (supported orders: 1..=4)")]
    UnsupportedOrder(u32),

    #[error("1 + lambda*T = {0} is not positive")]
    NonpositiveBase(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot parse signal expression {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    /// Stable upper-case tag, used in CLI diagnostics and JSON payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonConvergent(_) => "NON_CONVERGENT",
            Error::RadiusInfeasible(_) => "RADIUS_INFEASIBLE",
            Error::ExtrapolationUnstable(_) => "EXTRAPOLATION_UNSTABLE",
            Error::AliasingBound { .. } => "ALIASING_BOUND",
            Error::UnsupportedOrder(_) => "UNSUPPORTED_ORDER",
            Error::NonpositiveBase(_) => "NONPOSITIVE_BASE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Parse { .. } => "PARSE_ERROR",
        }
    }

    /// True for refusals raised by the series engine or the operator guards,
    /// as opposed to malformed input.
    pub fn is_engine_refusal(&self) -> bool {
        matches!(
            self,
            Error::NonConvergent(_)
                | Error::RadiusInfeasible(_)
                | Error::ExtrapolationUnstable(_)
                | Error::AliasingBound { .. }
                | Error::UnsupportedOrder(_)
                | Error::NonpositiveBase(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
