use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field degree r = {0} is outside the supported range 1..=12")]
    DegreeOutOfRange(usize),

    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: String, reason: String },

    #[error("modulus {modulus} is reducible over F_3: divisible by {factor}")]
    ReducibleModulus { modulus: String, factor: String },

    /// An argument that must be a nonzero field element was zero.
    #[error("{0} requires a nonzero argument")]
    ZeroArgument(&'static str),

    #[error("{family} is not defined for n = {n} ({rule})")]
    InvalidFamily {
        family: String,
        n: u32,
        rule: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// Work-size guard tripped; `limit` names the violated bound.
    #[error("{what} exceeds the enumeration guard ({limit})")]
    Guard { what: String, limit: String },

    #[error("weight prefix covers j <= {have} but j <= {need} is required; raise j_max")]
    InsufficientPrefix { have: usize, need: usize },

    /// An identity that must hold exactly did not.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn guard(what: impl Into<String>, limit: impl Into<String>) -> Self {
        Error::Guard {
            what: what.into(),
            limit: limit.into(),
        }
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// True for errors caused by the caller's input (bad parameters, guards).
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Consistency(_))
    }
}
