use thiserror::Error;

pub type Result<T> = std::result::Result<T, CasimirError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown unit tag `{0}` (expected length, frequency or time)")]
    UnknownUnit(String),

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("degenerate guarded range [{min}, {max}]: {reason}")]
    DegenerateRange { min: f64, max: f64, reason: String },

    /// An image term's denominator fell inside the light-cone guard band.
    #[error("evaluation too close to the light cone of image n = {image} ({term} term, |denominator| = {denominator:e})")]
    LightConeProximity {
        image: i64,
        term: &'static str,
        denominator: f64,
    },

    #[error("quadrature failed: estimate {estimate:e} with error {error:e}")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("regulator extrapolation diverges: raw estimates {estimates:?}")]
    ExtrapolationDivergence { estimates: Vec<f64> },

    #[error("Fourier tail beyond the window too large: tail {tail:e} vs scale {scale:e}")]
    TailTooLarge { tail: f64, scale: f64 },
}

impl CasimirError {
    /// True for the errors raised by numerical guards (light cone,
    /// quadrature, extrapolation) as opposed to bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            CasimirError::LightConeProximity { .. }
                | CasimirError::QuadratureFailure { .. }
                | CasimirError::ExtrapolationDivergence { .. }
                | CasimirError::TailTooLarge { .. }
        )
    }
}

pub(crate) fn ensure_finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CasimirError::NonFinite(what))
    }
}
