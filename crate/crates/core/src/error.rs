use thiserror::Error;

/// Errors raised by the arithmetic kernels and the constructions built on them.
///
/// Every variant has a stable machine-readable code (see [`Error::code`]) which
/// the command-line front-end forwards in its JSON reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(String),
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("modulus is reducible modulo p: {0}")]
    ReducibleModulus(String),
    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("Hensel condition val(f(x0)) > 2 val(f'(x0)) fails")]
    HenselConditionFailed,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("no contraction: val(b) = {vb} must exceed val(a) = {va}")]
    NoContraction { va: String, vb: String },
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("element is not a unit: {0}")]
    NotUnit(String),
    #[error("coefficient ring mismatch")]
    ModeMismatch,
    #[error("inner series has nonzero constant term")]
    NonzeroConstantTerm,
    #[error("linear coefficient is not a unit")]
    NonUnitLinearTerm,
    #[error("series evaluation at a non-topologically-nilpotent point")]
    DivergentEvaluation,
    #[error("insufficient truncation: need {needed} known terms, have {have}")]
    InsufficientTruncation { needed: usize, have: usize },
    #[error("operation needs a tower element of level >= 1")]
    LevelZero,
    #[error("sequence is not norm compatible at level {0}")]
    NotNormCompatible(usize),
    #[error("tower too shallow: need level {needed}, have {have}")]
    TowerTooShallow { needed: usize, have: usize },
    #[error("valuation of x_n is not constant across levels (level {level}: {found}, expected {expected})")]
    InconsistentValuation { level: usize, found: u64, expected: u64 },
    #[error("zero element where a nonzero one is required")]
    ZeroElement,
    #[error("P'(0) = 0")]
    ZeroLinearTerm,
    #[error("P'(0) is a unit; only val(P'(0)) >= 1 is supported")]
    UnitLinearTerm,
    #[error("degree {degree} obstruction is not divisible by the uniformizer")]
    ObstructionNotDivisible { degree: usize },
    #[error("element does not lie in the base field")]
    NotInBaseField,
    #[error("invalid polynomial shape: {0}")]
    InvalidShape(String),
    #[error("product did not stabilize after {0} factors")]
    NoConvergence(usize),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// Stable identifier used in JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CompositeP(_) => "CompositeP",
            Error::EvenPrime => "EvenPrime",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::InvalidRing(_) => "InvalidRing",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::HenselConditionFailed => "HenselConditionFailed",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NoContraction { .. } => "NoContraction",
            Error::NotDivisible(_) => "NotDivisible",
            Error::NotUnit(_) => "NotUnit",
            Error::ModeMismatch => "ModeMismatch",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::NonUnitLinearTerm => "NonUnitLinearTerm",
            Error::DivergentEvaluation => "DivergentEvaluation",
            Error::InsufficientTruncation { .. } => "InsufficientTruncation",
            Error::LevelZero => "LevelZero",
            Error::NotNormCompatible(_) => "NotNormCompatible",
            Error::TowerTooShallow { .. } => "TowerTooShallow",
            Error::InconsistentValuation { .. } => "InconsistentValuation",
            Error::ZeroElement => "ZeroElement",
            Error::ZeroLinearTerm => "ZeroLinearTerm",
            Error::UnitLinearTerm => "UnitLinearTerm",
            Error::ObstructionNotDivisible { .. } => "ObstructionNotDivisible",
            Error::NotInBaseField => "NotInBaseField",
            Error::InvalidShape(_) => "InvalidShape",
            Error::NoConvergence(_) => "NoConvergence",
            Error::Schema(_) => "SchemaError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
