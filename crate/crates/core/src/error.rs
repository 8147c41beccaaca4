use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix has a negative eigenvalue {value:.3e}")]
    NegativeEigenvalue { value: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("Kraus operators increase trace: largest eigenvalue of sum K†K is {max_eigenvalue}")]
    TraceIncreasing { max_eigenvalue: f64 },

    #[error("channel is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("channel is not strictly incoherent in the given basis (violation {violation:.3e})")]
    NotStrictlyIncoherent { violation: f64 },

    #[error("channel is not incoherent in the given basis (violation {violation:.3e})")]
    NotIncoherent { violation: f64 },

    #[error("channel commutes with dephasing; no classical-correlation witness exists")]
    NoWitness,

    #[error("parameter {value} outside the allowed range [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("index ({k}, {l}) out of range for dimension {d}")]
    IndexOutOfRange { k: usize, l: usize, d: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}
