//! Truncated p-adic arithmetic over Z_p and the cyclotomic rings Z_p[ζ_{p^r}].

mod cyclo;
mod num;
pub mod text;
mod valuation;

pub use cyclo::PadicCyclo;
#[allow(unused_imports)]
pub(crate) use num::{big_pow, mod_inverse, ord_int};
pub use num::{binomials, hensel_root, ord_factorial, poly_eval, PadicNum};
pub use valuation::Valuation;

use thiserror::Error;

/// Default number of p-adic digits carried by a computation.
pub const DEFAULT_PRECISION: i64 = 40;

/// Default cap on the cyclotomic level r of Z_p[ζ_{p^r}].
pub const DEFAULT_MAX_LEVEL: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("value is zero modulo p^{0}; exact valuation unavailable")]
    PrecisionExhausted(i64),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element is not congruent to 1 modulo the maximal ideal")]
    NotOneUnit,
    #[error("element is outside the disc of convergence")]
    NotInConvergenceDisc,
    #[error("cannot embed level {from} into lower level {to}")]
    LevelDecrease { from: u32, to: u32 },
    #[error("division by an element that is zero at working precision")]
    DivisionByZero,
    #[error("value is not p-adically integral")]
    NotIntegral,
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("p must be an odd prime, got {0}")]
    BadPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Validate the standing hypothesis that p is an odd prime.
pub fn check_prime(p: u64) -> Result<(), PadicError> {
    if p > 2 && crate::arith::is_prime(p) {
        Ok(())
    } else {
        Err(PadicError::BadPrime(p))
    }
}
