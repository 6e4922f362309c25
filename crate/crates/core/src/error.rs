use core::fmt;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operator had the wrong dimension for the requested operation.
    DimensionMismatch { expected: usize, found: usize },
    /// A matrix or amplitude contained NaN or infinity.
    NonFinite,
    /// `‖U†U − I‖_max` exceeded tolerance.
    NotUnitary { deviation: f64 },
    /// `Σ|amp|²` differs from one.
    NotNormalized { norm_sq: f64 },
    NotHermitian { deviation: f64 },
    TraceNotUnity { trace: f64 },
    /// Smallest eigenvalue is below the positivity floor.
    NotPositive { min_eigenvalue: f64 },
    /// Encoding index outside `1..=4`.
    MessageOutOfRange(u8),
    /// Readout found a superposition instead of a signed basis vector.
    NotBasisState { max_probability: f64 },
    /// The dominant amplitude of a readout carries a non-real phase.
    NonRealPhase { re: f64, im: f64 },
    /// Decoded bits that no message maps to.
    UnknownOutput { y: u8, x: u8 },
    /// Tomography records do not determine all coefficients.
    RankDeficient { rank: usize, required: usize },
    InvalidParameter { name: &'static str, value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite => f.write_str("non-finite value"),
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (max |U†U - I| = {deviation:e})")
            }
            Error::NotNormalized { norm_sq } => {
                write!(f, "state is not normalized (norm² = {norm_sq})")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max |ρ - ρ†| = {deviation:e})")
            }
            Error::TraceNotUnity { trace } => write!(f, "trace is {trace}, expected 1"),
            Error::NotPositive { min_eigenvalue } => {
                write!(f, "matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::MessageOutOfRange(i) => write!(f, "message index {i} outside 1..=4"),
            Error::NotBasisState { max_probability } => write!(
                f,
                "state is not a computational basis vector (max probability {max_probability})"
            ),
            Error::NonRealPhase { re, im } => {
                write!(f, "dominant amplitude {re}{im:+}i has no real sign")
            }
            Error::UnknownOutput { y, x } => write!(f, "no message decodes to |{y}{x}>"),
            Error::RankDeficient { rank, required } => {
                write!(f, "readout set has rank {rank}, {required} required")
            }
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
