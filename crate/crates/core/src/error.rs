use thiserror::Error;

use crate::series::CoefficientRing;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(CoefficientRing, CoefficientRing),

    #[error("leading coefficient {coefficient} is not invertible in {ring}")]
    NotInvertible {
        coefficient: String,
        ring: CoefficientRing,
    },

    #[error("unsupported modulus 2^{0}: bits must lie in 1..=64")]
    UnsupportedModulus(u32),

    #[error("operation requires exact coefficients, got {0}")]
    RequiresExact(CoefficientRing),

    #[error("truncation {trunc} is too small: {reason}")]
    InsufficientTrunc { trunc: i64, reason: String },

    #[error("series is not a polynomial in x of degree <= {max_deg}: residual is nonzero at q^{exponent}")]
    NotPolynomial { max_deg: u32, exponent: i64 },

    #[error("invalid eta quotient: {0}")]
    InvalidSpec(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("{numerator} is not divisible by 2^{bits} (at {location})")]
    InexactDivision {
        location: String,
        numerator: String,
        bits: u64,
    },

    #[error("valuation bound violated for U(x^{n}) at x^{r}: v2 < {bound} (coefficient {coefficient})")]
    ValuationViolation {
        n: u32,
        r: u32,
        bound: i64,
        coefficient: String,
    },

    #[error("support of U(x^{n}) starts at x^{r}, below the bound {bound}")]
    SupportViolation { n: u32, r: u32, bound: u32 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
