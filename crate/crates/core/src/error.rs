use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polyalg: zero denominator")]
    ZeroDenominator,
    #[error("polyalg: not a power series at 0 (denominator vanishes at z = 0)")]
    NotPowerSeries,
    #[error("polyalg: pole at z = {0}")]
    Pole(String),
    #[error("polyalg: cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("pattern: {0}")]
    InvalidPattern(String),
    #[error("pattern: probabilities sum to {0}, expected exactly 1")]
    ProbabilitySum(String),
    #[error("pattern: symbol index {index} out of range 1..={m}")]
    SymbolIndex { index: usize, m: usize },

    #[error("transfer: interaction matrix is singular")]
    SingularSystem,
    #[error("transfer: {0}")]
    Transfer(String),

    #[error("waiting: pattern is unrealizable (occurs with probability 0)")]
    Unrealizable,
    #[error("waiting: cumulative mass did not reach 1 - {tolerance} within {max} trials")]
    HorizonExceeded { tolerance: String, max: usize },

    #[error("oracle: symbol {symbol} out of range 1..={m}")]
    SymbolOutOfRange { symbol: u32, m: usize },
    #[error("oracle: enumeration of {states} states exceeds budget {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
    #[error("oracle: {0}")]
    Oracle(String),

    #[error("dna: malformed FASTA at line {line}: {reason}")]
    Fasta { line: usize, reason: String },
    #[error("dna: unknown symbol {symbol:?} at line {line}")]
    UnknownSymbol { symbol: char, line: usize },
    #[error("dna: {0}")]
    Dna(String),
    #[error("dna: io error: {0}")]
    Io(String),

    #[error("cli: {0}")]
    Cli(String),
    #[error("verify: {0} check(s) failed")]
    VerifyFailed(usize),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
