use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be {requirement}, got {value}")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("coupling g1 = {g1} lies below the minimal coupling g_min = {g_min}")]
    BelowMinimalCoupling { g1: f64, g_min: f64 },

    #[error("effective cavity gain kappa_g = {kappa_g} must be positive")]
    NonPositiveGain { kappa_g: f64 },

    #[error("discriminant does not change sign on [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("invalid probe window: {0}")]
    InvalidWindow(String),

    #[error("expected exactly 2 qualifying dips, found {count}")]
    DipCountMismatch { count: usize },

    #[error("need at least {required} samples, got {got}")]
    InsufficientSamples { got: usize, required: usize },

    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("enhancement cell eta = {eta}, xi = {xi}: {source}")]
    EnhancementCell {
        eta: f64,
        xi: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } | Error::BelowMinimalCoupling { .. } => "params",
            Error::NonPositiveGain { .. } | Error::NoRootInBracket { .. } => "spectral",
            Error::InvalidSamples(_) | Error::InsufficientSamples { .. } => "puiseux",
            Error::InvalidWindow(_) | Error::DipCountMismatch { .. } => "scattering",
            Error::EnhancementCell { .. } => "scattering",
        }
    }

    /// True for failures of a numerical procedure, as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoRootInBracket { .. } | Error::DipCountMismatch { .. } => true,
            Error::EnhancementCell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn invalid(name: &'static str, requirement: &'static str, value: f64) -> Self {
        Error::InvalidParameter {
            name,
            requirement,
            value,
        }
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, "positive and finite", value))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, "non-negative and finite", value))
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, "finite", value))
    }
}
