use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A propagator whose largest singular value exceeds one.
    #[error("unphysical transformation: largest singular value {sigma_max} exceeds 1")]
    Unphysical { sigma_max: f64 },

    /// The distinguishable coincidence rate vanishes, so rates cannot be
    /// normalised against it.
    #[error("degenerate normalisation: distinguishable coincidence probability is zero")]
    DegenerateNormalization,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
