use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: operands live in different polynomial rings")]
    RingMismatch,

    #[error("arity mismatch: expected {expected} exponents, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("unsupported coefficient field: {0}")]
    UnsupportedField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("computation too large: more than {limit} S-pair reductions")]
    ComputationTooLarge { limit: u64 },

    #[error("monomial order mismatch between polynomial and Groebner basis")]
    OrderMismatch,

    #[error("height requires a domain: algebra `{0}` is not asserted `domain`")]
    NotDomain(String),

    #[error("big-height test requires a factorial ambient: {0}")]
    NotFactorial(String),

    #[error("ill-defined map `{map}`: relation {relation} does not map into the target ideal")]
    IllDefinedMap { map: String, relation: String },

    #[error("map source/target mismatch: {0}")]
    SourceMismatch(String),

    #[error("witness `{witness}` rejected: claimed height {claimed}, computed {computed}")]
    HeightMismatch {
        witness: String,
        claimed: i64,
        computed: i64,
    },

    #[error("inconsistent evidence: {0}")]
    InconsistentEvidence(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("algebra must be two-dimensional, found dimension {0}")]
    DimensionNotTwo(i64),

    #[error("monoid error: {0}")]
    Monoid(String),

    #[error("lattice error: {0}")]
    Lattice(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{line}:{col}: syntax error: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{line}:{col}: {msg}")]
    Resolve { line: usize, col: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
