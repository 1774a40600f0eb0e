use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    /// Ensemble dimensions violate `m <= n` (and `m <= p <= n` for case B).
    #[error("invalid ensemble: {0}")]
    InvalidSpec(String),

    /// The Metropolis step-size adaptation did not reach a usable acceptance rate.
    #[error("sampler tuning failed: acceptance rate {rate:.3} outside [0.1, 0.7]")]
    Tuning { rate: f64 },

    /// An identity was asked to run outside its stated parameter range.
    #[error("identity {id}: parameter constraint violated: {constraint}")]
    IdentityDomain { id: String, constraint: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}
