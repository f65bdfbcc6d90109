use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {0} exceeds the supported cap of {1}")]
    DegreeCap(usize, usize),
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("polynomial is reducible; factor it first")]
    Reducible,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size cap exceeded: p^m = {0}^{1} does not fit the enumeration bound")]
    FieldSizeCap(u64, u32),
    #[error("ring size cap exceeded: p^(n*m) = {0}^{1} exceeds 2^24")]
    RingSizeCap(u64, u32),
    #[error("{n} does not divide the group order; minimal valid extension degree is m = {minimal_m}")]
    RootOfUnityDegree { n: u64, minimal_m: u32 },
    #[error("not a 1-unit: {0} is outside the domain of the {1}-adic logarithm")]
    LogDomain(String, u64),
    #[error("valuation too small: {0} is outside the convergence domain of the {1}-adic exponential")]
    ExpDomain(String, u64),
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(String, u64),
    #[error("witness search bound {0} exhausted")]
    SearchBoundExhausted(u64),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("prime too large for naive point counting: {0}")]
    CountingCap(u64),
    #[error("torsion field scan exceeded degree bound {0}")]
    TorsionFieldBound(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
