use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient precision must be at least 1 (got {0})")]
    BadPrecision(u32),
    #[error("modulus {p}^{k} does not fit the residue type {type_name}")]
    CapacityExceeded {
        p: u64,
        k: u32,
        type_name: &'static str,
    },
    #[error("operands belong to different rings")]
    ContextMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("Galois index {0} is divisible by p")]
    BadGaloisIndex(i64),
    #[error("{0} is divisible by p")]
    DivisibleByP(i64),
    #[error("precision too low: need {needed}, have {available}")]
    PrecisionTooLow { needed: u64, available: u64 },
    #[error("not a p-th power: unit class level {level} is below p+1")]
    NotAPthPower { level: u64 },
    #[error("degree {e} is divisible by p = {p}")]
    WildRamification { p: u64, e: u64 },
    #[error("degree must be at least 2 (got {0})")]
    BadDegree(u64),
    #[error("index {0} is outside the admissible range")]
    BadIndex(i64),
    #[error("constructed generator at level {0} failed the primar test")]
    GeneratorNotPrimar(u64),
    #[error("enumeration of {size} elements exceeds the budget of {budget}")]
    TooLarge { size: u128, budget: u128 },
    #[error("unit has no decomposition as root of unity times a real unit")]
    NoRealDecomposition,
    #[error("{which} intersection has dimension {dim}, expected 0")]
    IntersectionNonTrivial { which: &'static str, dim: usize },
    #[error("p = {p} is outside the configured range (max {max})")]
    OutOfConfiguredRange { p: u64, max: u64 },
    #[error("unit is primar but no p-th root was found: {0}")]
    CertificateImpossible(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

impl Error {
    pub(crate) fn precision(needed: u64, available: u64) -> Self {
        Error::PrecisionTooLow { needed, available }
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionTooLow { .. } | Error::BadPrecision(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
