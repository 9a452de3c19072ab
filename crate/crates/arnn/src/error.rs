use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The network needs at least two nodes (all couplings are off-diagonal).
    #[error("network size must be at least 2, got {0}")]
    InvalidSize(usize),

    /// A numeric parameter is outside its documented range.
    #[error("invalid parameter `{name}`: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// The fixed-point iteration did not reach the residual tolerance.
    #[error("fixed point did not converge after {iterations} iterations (last residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A linear system is numerically singular.
    #[error("matrix is numerically singular (reciprocal condition estimate {rcond:.3e})")]
    Singular { rcond: f64 },

    /// Two matrices that must agree in shape do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A malformed row in an input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation that needs data received none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// No slot in the trace contains a compromised node.
    #[error("no compromised slot found; cannot place a training window")]
    NoCompromisedSlot,

    /// The training window does not fit inside the trace.
    #[error("training window {lo}..={hi} does not fit in slots 1..={num_slots}")]
    WindowOutOfRange {
        lo: i64,
        hi: i64,
        num_slots: usize,
    },

    /// An invalid generator or run configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A checkpoint file is malformed or corrupted.
    #[error("bad checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
