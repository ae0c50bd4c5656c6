//! Recovery of exponential power series `Σ d_i (1+T)^{e_i}` from their values
//! at p-power roots of unity, and of the Weil parts `π_i^{k−1}` from values at
//! weight k.

mod cancel;
mod fit;
mod form;
mod linear;

pub use cancel::{cancellation_probe, CancellationPattern};
pub use fit::{fit_bounded, fit_single, verify_form, LevelWitness, RecoveryReport, RecoveryStatus, SingleFit, Verdict};
pub use form::{ExponentialForm, SampleSet, Term, INTEGER_EXPONENT_PREC};
pub use linear::{cramer_recover, cramer_solve, determinant, vandermonde_select, VandermondeSelection};

use thiserror::Error;

use crate::cyclo::CycloError;
use crate::padic::PadicError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("sample at exponent {0} is not a root of unity")]
    NotMonomial(u64),
    #[error("samples are inconsistent: {0}")]
    Inconsistent(String),
    #[error("level {level}: Fourier coefficient at residue {residue} is not divisible by p^{level}")]
    NotDivisible { level: u32, residue: u64 },
    #[error("level {level}: {found} nonzero Fourier coefficients exceed the bound {bound}")]
    SupportTooLarge { level: u32, found: usize, bound: usize },
    #[error("level {level}: coefficients at residue {residue} do not refine the level below")]
    LevelMismatch { level: u32, residue: u64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("linear system is singular")]
    SingularSystem,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}
