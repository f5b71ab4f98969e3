use thiserror::Error;

/// Errors raised by field, polynomial, code and invariant operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),
    #[error("field of size {size} exceeds the table cap {cap}")]
    TableCapExceeded { size: u128, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("linearized polynomial is not invertible")]
    NotInvertible,
    #[error("codes have different scalar modes")]
    ScalarModeMismatch,
    #[error("enumeration of {0} items exceeds the budget")]
    BudgetExceeded(u128),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("norm condition violated: N(eta) = (-1)^(nk)")]
    NormConditionViolated,
    #[error("congruence condition violated: {0}")]
    CongruenceViolated(String),
    #[error("delta constraint violated: {0}")]
    DeltaConstraintViolated(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("code is not F_{{q^n}}-linear on the left")]
    NotFqnLinear,
    #[error("code is not MRD")]
    NotMrd,
    #[error("k = {0} is too small (k > 2 required)")]
    KTooSmall(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
