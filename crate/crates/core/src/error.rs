//! Error type shared by all solver modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("qubit count m={0} outside supported range 1..=26")]
    QubitCountOutOfRange(u32),
    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("value length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("hbar must be positive, got {0}")]
    NonPositiveHbar(f64),
    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,
    #[error("derivative order {0} outside supported range {1}")]
    DerivativeOrderOutOfRange(u32, &'static str),
    #[error("unknown splitting scheme id '{0}'")]
    UnknownScheme(String),
    #[error("invalid splitting scheme: {0}")]
    InvalidScheme(String),
    #[error("packet width must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("{0}")]
    InvalidState(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("initial data requires the domain [-2, 2], got [{x0}, {x1}]")]
    WrongDomain { x0: f64, x1: f64 },
    #[error("time step must be positive, got {0}")]
    NonPositiveDt(f64),
    #[error("observer aborted evolution at step {step}: {reason}")]
    ObserverAbort { step: usize, reason: String },
    #[error("index {index} out of range for {len} entries")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operator is not Hermitian: imaginary residue {0:.3e} exceeds tolerance")]
    NotHermitian(f64),
    #[error("invalid commutator word: {0}")]
    InvalidWord(String),
    #[error("no closed form available for commutator word {0}")]
    UnsupportedWord(String),
    #[error("scaling probe needs at least {min} states, got {got}")]
    DegenerateSweep { min: usize, got: usize },
    #[error("phase array length {got} does not match statevector dimension {expected}")]
    PhaseLengthMismatch { expected: usize, got: usize },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("invalid estimate request: {0}")]
    InvalidEstimate(String),
    #[error("potential derivative probe failed: {0}")]
    DerivativeProbe(String),
}

pub type Result<T> = std::result::Result<T, Error>;
