use thiserror::Error;

/// Errors raised by state validation, the discord engine and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NonHermitian { deviation: f64 },

    #[error("trace is not one: tr = {trace}")]
    TraceNotOne { trace: f64 },

    #[error("state is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("method not applicable: {0}")]
    NotApplicable(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("x-state positivity violated: {constraint} ({lhs:e} < {rhs:e})")]
    XStatePositivity {
        constraint: &'static str,
        lhs: f64,
        rhs: f64,
    },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("verification failed: {method} gave {value}, numeric gave {numeric} (|diff| = {diff:e})")]
    VerificationFailed {
        method: &'static str,
        value: f64,
        numeric: f64,
        diff: f64,
    },

    #[error("degenerate denominator in the compact x-state formula (numerator {numerator:e})")]
    DegenerateDenominator { numerator: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
