use thiserror::Error;

/// Errors raised by field construction, function tabulation and the
/// family/curve machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} outside the supported range 2..=16")]
    UnsupportedDegree(u32),

    #[error("polynomial {poly:#x} is not an irreducible polynomial of degree {m}")]
    NotIrreducible { m: u32, poly: u32 },

    #[error("operands belong to different fields (m={left_m}, {left_poly:#x} vs m={right_m}, {right_poly:#x})")]
    FieldMismatch {
        left_m: u32,
        left_poly: u32,
        right_m: u32,
        right_poly: u32,
    },

    #[error("element {value:#x} does not fit in GF(2^{m})")]
    ElementOutOfRange { m: u32, value: u32 },

    #[error("cannot parse field element literal {0:?}")]
    BadElementLiteral(String),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("component selector (0, 0) does not define a component function")]
    ZeroSelector,

    #[error("truth table length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("truth tables for m={m} exceed the configured cap m <= {max}")]
    TableTooLarge { m: u32, max: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("linearized polynomial has a vanishing top form")]
    ZeroTopForm,
}

pub type Result<T> = std::result::Result<T, Error>;
