//! The Iwasawa algebra Λ = Z_p[[T]] as truncated series.

mod probe;
mod series;
mod specialize;
mod weierstrass;

pub use probe::stable_polygon_probe;
pub use series::LambdaSeries;
pub use specialize::{eval_small, specialize, Evaluation, SpecPoint};
pub use weierstrass::{root_bound, weierstrass_prep, WeierstrassData};

use thiserror::Error;

use crate::newton::NewtonError;
use crate::padic::PadicError;

/// Default number of retained series coefficients.
pub const DEFAULT_TRUNCATION: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambdaError {
    #[error("series is zero at working precision")]
    ZeroSeries,
    #[error("no unit coefficient among the first {0} after removing p^k")]
    TruncationTooShort(usize),
    #[error("evaluation point has valuation 0; the series need not converge")]
    NotInMaximalIdeal,
    #[error("series coefficients must be p-adic integers")]
    NotIntegral,
    #[error("invalid specialization point: {0}")]
    BadSpecPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}
