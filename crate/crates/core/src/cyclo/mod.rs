//! Exact cyclotomic arithmetic: integers and rationals in Q(ζ_n), quadratic
//! extensions by √−d, the house, sums of roots of unity, and the reduction
//! Z[ζ_{p^n}] → F_p[y]/(y^{p^m} − 1).

mod elem;
mod house;
mod nroi;
mod poly;
mod quad;
mod quotient;

pub use elem::{fixing_group, parse_cyclo_int, parse_cyclo_num, Cyclo, CycloInt, CycloNum, RootOfUnity};
pub use house::{house, house_num, house_sq, RealInterval, DEFAULT_HOUSE_BITS};
pub use nroi::{loxton_bound, n_roi, sum_table, DEFAULT_LOXTON_C, DEFAULT_LOXTON_D, MAX_NROI_CAP};
pub use poly::{cyclotomic, reduce, Coeff};
pub use quad::{disc_of, is_squarefree, sqrt_minus_d_cyclo, Field, QuadCycloNum};
pub(crate) use quotient::p_level;
pub use quotient::{quotient_reduce, quotient_reduce_padic, TruncPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("conductor {from} does not divide {to}")]
    BadConductor { from: u64, to: u64 },
    #[error("element does not lie in Q(ζ_{0})")]
    NotInSubfield(u64),
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("√−{d} already lies in Q(ζ_{m})")]
    NotAField { m: u64, d: u64 },
    #[error("no representation with at most {cap} roots of unity in the searched group")]
    NotFound { cap: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("quotient level {m} must be below the ring level {n}")]
    LevelError { m: u32, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}
