//! Eigensystems, CM theta series of class-number-one imaginary quadratic
//! fields, coefficient bounds, Frobenius characteristic polynomials, and
//! the CM family coefficients fed to the rigidity engine.

mod bounds;
mod character;
mod charpoly;
mod eigen;
mod family;
mod place;
mod quadratic;

pub use bounds::{
    cm_check, conjugate_ordinarity_check, hecke_field_degree, house_sq_le, p_stabilize, ramanujan_check, slope_check,
    trivial_bound_check, BoundCheck, BoundMethod, CmCheck, HeckeDegree, OrdinarityCheck, SlopeCheck,
};
pub use character::{HeckeCharData, NebenChar};
pub use charpoly::{charpoly_from_conjugates, charpoly_house_bounds, CharPolyCoeffs, FrobeniusPair, HouseBound};
pub use eigen::{parse_coefficient, theta_build, Eigensystem, Stabilization};
pub use family::{
    cm_family_coeff, field_degree, pipeline_run, FamilyCoeff, FamilyTerm, PipelineConfig, PipelineReport, PrimeReport,
};
pub use place::{embeds_at, Place};
pub use quadratic::{ImagQuadField, QuadInt, ResidueRing, Splitting, CLASS_NUMBER_ONE};

use thiserror::Error;

use crate::cyclo::CycloError;
use crate::padic::PadicError;
use crate::rigidity::RigidityError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModformsError {
    #[error("Q(√−{0}) does not have class number one")]
    ClassNumberNotOne(u64),
    #[error("ill-defined character: {0}")]
    IllDefinedCharacter(String),
    #[error("interval comparison inconclusive at {bits} bits")]
    Inconclusive { bits: u32 },
    #[error("no p-adic unit root: the input is not ordinary")]
    NoUnitRoot,
    #[error("U_p eigenvalue is zero")]
    ZeroUpEigenvalue,
    #[error("coefficients outside the supported fields: {0}")]
    NonCyclotomicCoefficients(String),
    #[error("coefficient A_{index} is moved by σ_{automorphism}; the pairs are not a full Galois orbit")]
    NotAFullOrbit { index: usize, automorphism: u64 },
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("{0} is inert in E")]
    InertPrime(u64),
    #[error("{0} is ramified in E or divides the conductor")]
    RamifiedPrime(u64),
    #[error("coefficient a_{0} is missing")]
    MissingCoefficient(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("stage {stage} failed: {message}")]
    Stage { stage: &'static str, message: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
}
