use thiserror::Error;

use crate::cyclotomic::CyclotomicInteger;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("modulus must be at least {min}, got {m}")]
    ModulusTooSmall { m: usize, min: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("{d} does not divide {m}")]
    NotADivisor { d: usize, m: usize },

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("element is not in the kernel; phi(x) = {witness}")]
    NotInKernel { witness: CyclotomicInteger },

    #[error("element has a negative coefficient")]
    NotNonnegative,

    #[error("element is zero")]
    ZeroElement,

    #[error("element is not minimal: {0}")]
    NotMinimal(String),

    #[error("modulus {m} has {r} distinct primes; {needed}")]
    PrimeCount { m: usize, r: usize, needed: &'static str },

    #[error("max weight {requested} exceeds the guard {guard}; pass an explicit override")]
    WeightGuard { requested: usize, guard: usize },

    #[error("search node budget of {0} exhausted")]
    BudgetExhausted(u64),

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
