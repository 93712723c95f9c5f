use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a token stream failed to parse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenErrorKind {
    #[error("unknown token {0:?}")]
    UnknownToken(String),
    #[error("expected a sign token")]
    ExpectedSign,
    #[error("sign token {0:?} not allowed here")]
    BadSign(String),
    #[error("sign with no digits")]
    MissingDigits,
    #[error("digit {digit} is not below base {base}")]
    DigitTooLarge { digit: u64, base: u32 },
    #[error("leading zero digit")]
    LeadingZero,
    #[error("integer overflows 63 bits")]
    Overflow,
    #[error("odd number of encoded integers")]
    UnpairedResidue,
    #[error("residue {residue} >= modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} does not follow the previous modulus in increasing order")]
    UnorderedModulus(u64),
    #[error("expected exactly one encoded integer, found {0}")]
    ExpectedSingle(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero is outside the domain of {0}")]
    Zero(&'static str),

    #[error("{0} exceeds the supported ceiling 2^63-1")]
    TooLarge(u64),

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("sieve range of {len} values exceeds the budget of {budget}")]
    SieveBudget { len: u64, budget: u64 },

    #[error("invalid prime basis: {0}")]
    InvalidBasis(String),

    #[error("residue vector invalid: {0}")]
    InvalidResidues(String),

    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("malformed token stream at token {position}: {kind}")]
    Token {
        position: usize,
        kind: TokenErrorKind,
    },

    #[error("cannot draw {count} distinct integers from [{lo}, {hi}]")]
    Infeasible { count: u64, lo: u64, hi: u64 },

    #[error("{n} is outside the domain of task {task}")]
    OutsideTaskDomain { n: u64, task: String },

    #[error("invalid task: {0}")]
    InvalidTask(String),

    #[error("corruption scheme {scheme} needs prime {prime} in the basis")]
    SchemeIncompatible { scheme: &'static str, prime: u64 },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("basis of {k} primes is too large for exact enumeration (max {max}); use Monte Carlo")]
    EnumerationTooLarge { k: usize, max: usize },

    #[error("{path}:{line}: {message}")]
    DatasetLine {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short stable identifier used in machine-parseable CLI errors.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Zero(_) => "zero",
            Error::TooLarge(_) => "too-large",
            Error::InvalidRange { .. } => "invalid-range",
            Error::SieveBudget { .. } => "sieve-budget",
            Error::InvalidBasis(_) => "invalid-basis",
            Error::InvalidResidues(_) => "invalid-residues",
            Error::InvalidBase(_) => "invalid-base",
            Error::Token { .. } => "token",
            Error::Infeasible { .. } => "infeasible",
            Error::OutsideTaskDomain { .. } => "task-domain",
            Error::InvalidTask(_) => "invalid-task",
            Error::SchemeIncompatible { .. } => "scheme-incompatible",
            Error::BasisMismatch(_) => "basis-mismatch",
            Error::EnumerationTooLarge { .. } => "enumeration-too-large",
            Error::DatasetLine { .. } => "dataset-line",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
