use thiserror::Error;

/// Errors raised by the exact and numeric layers of the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("root orders differ: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },

    #[error("order {0} is neither prime nor 4")]
    UnsupportedOrder(u32),

    #[error("coefficient overflow in cyclotomic arithmetic")]
    Overflow,

    #[error("shape mismatch: {0}")]
    Mismatch(String),

    #[error("basis 0 is not unitary")]
    NotUnitary,

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("unknown matrix name `{0}`")]
    UnknownName(String),

    #[error("matrix is not a complex Hadamard matrix: {0}")]
    NotHadamard(String),

    #[error("no seed converged: {0}")]
    NoConvergence(String),

    #[error("vector family not in the catalog: {0}")]
    UnknownFamily(String),

    #[error("sets mix exact and floating-point bases")]
    BackendMismatch,

    #[error("set is not in standard form: {0}")]
    NotStandardForm(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
