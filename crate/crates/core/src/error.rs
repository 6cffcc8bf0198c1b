use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate bulk potential: with a = b = 0 the only critical point is Q = 0")]
    DegeneratePotential,

    #[error(
        "tensor has a kernel component of size {residual:.3e}, above the tolerance {tolerance:.3e}"
    )]
    NotInRange { residual: f64, tolerance: f64 },

    #[error("singular parameters: {0}")]
    SingularParameter(String),

    #[error("parameter validation failed: {0}")]
    Validation(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("time step rejected: {0}")]
    Cfl(String),

    #[error("solver aborted at step {step}: {reason}")]
    SolverAbort { step: u64, reason: String },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
