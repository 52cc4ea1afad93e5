use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Variants fall into three broad classes (see [`ErrorClass`]) which the
/// command-line front end maps onto distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field of size {p}^{h} exceeds the 2^16 limit")]
    FieldTooLarge { p: u32, h: u32 },
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration would visit {count} subspaces (limit {limit})")]
    TooManySubspaces { count: u128, limit: u128 },
    #[error("bad rate: {0}")]
    BadRate(String),
    #[error("divisibility violated: {0}")]
    DivisibilityViolation(String),
    #[error("code has q^k = {q}^{k} codewords, beyond the enumeration limit")]
    CodeTooLarge { q: u32, k: usize },
    #[error("kernel is the full space; no nontrivial image")]
    KernelFullSpace,
    #[error("distribution is a point mass at the origin (d = 0)")]
    DegenerateDistribution,
    #[error("n = {0} is not in L_tau: some mass times n is fractional")]
    NotInLtau(u64),
    #[error("support of size {size} exceeds the search limit {limit}")]
    SupportTooLarge { size: usize, limit: usize },
    #[error("q^l = {0} dual vectors is beyond the enumeration limit")]
    TooManyDualVectors(u64),
    #[error("table with q^l = {0} entries is beyond the transform limit")]
    TableTooLarge(u64),
    #[error("result has imaginary residue {0:e}; input is not scalar-symmetric")]
    NonRealResult(f64),
    #[error("distribution is only {actual}-smooth, {required} required")]
    NotSmoothEnough { actual: f64, required: f64 },
    #[error("sparsity s = {0} is even; the Fourier bound is proved for odd s only")]
    EvenSparsity(u64),
    #[error("matrix is not smooth (some nonzero dual vector annihilates every row)")]
    NotSmooth,
    #[error("dynamic-programming state space too large: {0}")]
    StateSpaceTooLarge(String),
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("bisection failed to bracket a root: {0}")]
    BisectionNoBracket(String),
    #[error("lambda * n = {0} is not an integer")]
    NonIntegralWeight(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no certifiable sparsity found after {rounds} doublings (last s = {last_s})")]
    NoCertifiableS { rounds: u32, last_s: u64 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The caller asked for something the mathematics does not allow.
    Precondition,
    /// An enumeration or table guard tripped.
    Resource,
    /// A numerical routine produced an unusable value.
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            TooManySubspaces { .. }
            | CodeTooLarge { .. }
            | SupportTooLarge { .. }
            | TooManyDualVectors(_)
            | TableTooLarge(_)
            | StateSpaceTooLarge(_)
            | FieldTooLarge { .. } => ErrorClass::Resource,
            NonRealResult(_) | BisectionNoBracket(_) | NoCertifiableS { .. } => {
                ErrorClass::Numeric
            }
            _ => ErrorClass::Precondition,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
