use thiserror::Error;

/// Errors raised by the exponent, geometry and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula being evaluated.
    #[error("domain error: {0}")]
    Domain(String),
    /// A root bracket could not be established or expanded.
    #[error("bracket expansion failed: {0}")]
    Bracket(String),
    /// The requested configuration cannot be realised.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A configuration field failed validation.
    #[error("invalid field `{field}`: {msg}")]
    Config { field: String, msg: String },
    /// A lattice basis could not be parsed or is singular.
    #[error("lattice: {0}")]
    Lattice(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
