use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (‖A − A†‖_F = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (‖U·U† − I‖_F = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("coefficient matrix is zero; no state to normalize")]
    ZeroState,

    #[error("{0}")]
    Domain(String),

    #[error("transmission matrix has gain (largest transmission eigenvalue {largest:.12})")]
    GainMedium { largest: f64 },

    #[error("transmission matrix is identically zero")]
    ZeroMedium,

    #[error("smallest transmission eigenvalue is zero; the ratio T+/T- diverges")]
    SingularChannel,

    #[error("media block all coincidences (Z = {z:.3e})")]
    FullyBlocked { z: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
