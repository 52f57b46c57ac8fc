use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A request exceeds the capacity of a backend (qubits, amplitudes,
    /// enumerated assignments).
    #[error("{backend} capacity exceeded: requires {required}, limit is {limit}")]
    Capacity {
        backend: &'static str,
        required: u64,
        limit: u64,
    },

    /// Malformed gate, circuit, register or distribution.
    #[error("structural error: {0}")]
    Structure(String),

    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A delay value does not fit the register it must be written into.
    #[error("encoding error: {0}")]
    Encoding(String),

    /// Register widths are incompatible for an arithmetic gadget.
    #[error("width error: {0}")]
    Width(String),

    /// An instance file is well-formed JSON but violates an invariant.
    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("instance parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
