use thiserror::Error;

pub type Result<T> = std::result::Result<T, NmimError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NmimError {
    #[error("distribution has no events")]
    EmptyDistribution,

    #[error("probability {0} is outside (0, 1]")]
    InvalidProbability(f64),

    #[error("probabilities sum to {0}, expected 1 within 1e-9")]
    NotNormalized(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("minimum probability {0} is not unique")]
    NonUniqueMinimum(f64),

    #[error("index {index} out of range for {len} events")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("budget error: {0}")]
    Budget(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("oracle guard violated: {0}")]
    Guard(String),
}

impl NmimError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        NmimError::Domain(msg.into())
    }

    /// True for errors caused by a budget that cannot be placed, as opposed
    /// to malformed input.
    pub fn is_infeasibility(&self) -> bool {
        matches!(self, NmimError::Budget(_) | NmimError::Infeasible(_))
    }
}
