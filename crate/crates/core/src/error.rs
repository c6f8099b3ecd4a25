use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("size {requested} exceeds the desk-scale limit of {limit}")]
    Scale { requested: usize, limit: usize },

    #[error("state leaks {leaked_norm:e} norm outside the single-excitation sector")]
    SectorLeak { leaked_norm: f64 },

    #[error("blocks have different determinants (|det v - det u| = {mismatch:e})")]
    Determinant { mismatch: f64 },

    #[error(
        "gate {gate_index} does not conserve the excitation number; parity-changing matchgates \
         run only on the statevector backend"
    )]
    Sector { gate_index: usize },

    #[error("invalid probability distribution: {0}")]
    Distribution(String),

    #[error(
        "gate {gate_index} is a general (v, u) matchgate; convert its coin with \
         `coin_to_params` to obtain an M(theta, phi, lambda) gate before emitting QASM"
    )]
    UnsupportedGate { gate_index: usize },

    #[error("gate pair ({first}, {second}) is not a nearest-neighbour pair")]
    NotAdjacent { first: usize, second: usize },

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
