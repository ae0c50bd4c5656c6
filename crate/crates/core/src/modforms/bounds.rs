use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use super::eigen::{eps_root, is_zero_int, Eigensystem, Stabilization};
use super::place::Place;
use super::quadratic::{ImagQuadField, Splitting};
use super::ModformsError;
use crate::arith::{is_prime, lcm};
use crate::cyclo::{fixing_group, house_sq, CycloInt, CycloNum, RealInterval, DEFAULT_HOUSE_BITS};
use crate::padic::{hensel_root, PadicNum};

/// How a bound was decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    /// `|σ(a)|² = σ(a·ā)` is rational, so every embedding has the same value.
    Exact(BigRational),
    /// A certified enclosure of the squared house.
    Interval(RealInterval),
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundMethod::Exact(v) => write!(f, "exact |a|^2={v}"),
            BoundMethod::Interval(iv) => write!(f, "interval |a|^2∈{iv}"),
        }
    }
}

/// Compare the squared house of `x` with `bound`, exactly when possible and
/// otherwise with intervals refined until they separate.
pub fn house_sq_le(x: &CycloNum, bound: &BigInt) -> Result<(bool, BoundMethod), ModformsError> {
    let b = BigRational::from_integer(bound.clone());
    if x.is_zero() {
        return Ok((true, BoundMethod::Exact(BigRational::zero())));
    }
    if let Some(r) = x.mul_ref(&x.conj()).normalize_conductor().as_rational() {
        return Ok((r <= b, BoundMethod::Exact(r)));
    }
    let mut bits = DEFAULT_HOUSE_BITS;
    for _ in 0..4 {
        let iv = house_sq(x, bits);
        if let Some(v) = iv.le_rational(&b) {
            return Ok((v, BoundMethod::Interval(iv)));
        }
        bits *= 2;
    }
    Err(ModformsError::Inconclusive { bits })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub ell: u64,
    pub holds: bool,
    /// The bound on `|a_ℓ|²`.
    pub bound_sq: BigInt,
    pub method: BoundMethod,
    pub ell_divides_level: bool,
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ell={} holds={} bound_sq={} {}{}",
            self.ell,
            self.holds,
            self.bound_sq,
            self.method,
            if self.ell_divides_level { " (ℓ | N)" } else { "" }
        )
    }
}

fn bound_check(f: &Eigensystem, l: u64, bound_sq: BigInt) -> Result<BoundCheck, ModformsError> {
    let a = f.require(l)?;
    let (holds, method) = house_sq_le(&a.to_num(), &bound_sq)?;
    Ok(BoundCheck { ell: l, holds, bound_sq, method, ell_divides_level: f.level().is_multiple_of(l) })
}

/// `|a_ℓ| ≤ 2ℓ^{(k−1)/2}` in every complex embedding.
pub fn ramanujan_check(f: &Eigensystem, l: u64) -> Result<BoundCheck, ModformsError> {
    bound_check(f, l, BigInt::from(4) * BigInt::from(l).pow(f.weight() - 1))
}

/// `|a_ℓ| ≤ 2ℓ^{k/2+1}` in every complex embedding.
pub fn trivial_bound_check(f: &Eigensystem, l: u64) -> Result<BoundCheck, ModformsError> {
    bound_check(f, l, BigInt::from(4) * BigInt::from(l).pow(f.weight() + 2))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmCheck {
    pub tested: Vec<u64>,
    pub failures: Vec<u64>,
    pub warning: Option<String>,
}

impl CmCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `a_ℓ = 0` for every prime ℓ inert in E up to the largest stored index.
pub fn cm_check(f: &Eigensystem, field: ImagQuadField) -> Result<CmCheck, ModformsError> {
    let top = f.bound();
    let mut tested = Vec::new();
    let mut failures = Vec::new();
    for l in (2..=top).filter(|&l| is_prime(l) && field.splitting(l) == Splitting::Inert) {
        if f.is_stabilized() && l == f.p() {
            continue;
        }
        let a = f.require(l)?;
        tested.push(l);
        if !is_zero_int(a) {
            failures.push(l);
        }
    }
    let warning = tested.is_empty().then(|| "no inert primes in range; the check is vacuous".to_string());
    Ok(CmCheck { tested, failures, warning })
}

/// Replace `a_p` by the unit root of `x² − a_p x + ε(p)p^{k−1}` under the
/// given place, and multiply the level by p.
pub fn p_stabilize(f: &Eigensystem, place: Place, prec: i64) -> Result<Eigensystem, ModformsError> {
    let p = f.p();
    if place.p() != p {
        return Err(ModformsError::DomainError("place lies over a different prime".into()));
    }
    if f.level().is_multiple_of(p) || f.is_stabilized() {
        return Err(ModformsError::DomainError(format!("p = {p} already divides the level")));
    }
    let ap = place.embed_tame(f.require(p)?, prec)?;
    let eps = place.embed_tame(&eps_root(f, p)?.to_cyclo(), prec)?;
    let c = eps.mul_ref(&PadicNum::from_int(p, BigInt::from(p).pow(f.weight() - 1), prec));
    let poly = [c.clone(), ap.neg_ref(), PadicNum::one(p, prec)];
    // Root valuations: v(c) = k − 1 and v(a_p) ≥ 0, so a unit root exists
    // iff a_p is a unit (k ≥ 2) or c is a unit (k = 1).
    let residues: Vec<u64> = (1..p)
        .filter(|&r| {
            let x = PadicNum::from_int(p, r, 1);
            crate::padic::poly_eval(&poly, &x).truncate(1).is_zero()
        })
        .collect();
    if residues.is_empty() {
        return Err(if c.is_unit() {
            ModformsError::Unsupported("the unit roots lie outside Q_p".into())
        } else {
            ModformsError::NoUnitRoot
        });
    }
    let up = residues
        .iter()
        .find_map(|&r| hensel_root(&poly, r, prec).ok())
        .ok_or_else(|| ModformsError::Unsupported("unit roots collide modulo p".into()))?;
    Ok(f.clone().with_stabilization(Stabilization { place, up }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeCheck {
    pub slope: Ratio<i64>,
    pub weight: u32,
    pub holds: bool,
}

impl fmt::Display for SlopeCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slope={} range=[0,{}] holds={}", self.slope, self.weight - 1, self.holds)
    }
}

/// `0 ≤ ord_p(a_p) ≤ k − 1` for the U_p eigenvalue.
pub fn slope_check(f: &Eigensystem, place: Place, prec: i64) -> Result<SlopeCheck, ModformsError> {
    let slope = match f.stabilization() {
        Some(st) => {
            if st.up.is_zero() {
                return Err(ModformsError::ZeroUpEigenvalue);
            }
            Ratio::from_integer(st.up.ord_exact()?)
        }
        None => {
            if !f.level().is_multiple_of(f.p()) {
                return Err(ModformsError::DomainError("slope needs p | N; stabilize first".into()));
            }
            let ap = f.require(f.p())?;
            if is_zero_int(ap) {
                return Err(ModformsError::ZeroUpEigenvalue);
            }
            place.valuation(ap, prec)?
        }
    };
    let top = Ratio::from_integer(f.weight() as i64 - 1);
    Ok(SlopeCheck { slope, weight: f.weight(), holds: slope >= Ratio::zero() && slope <= top })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdinarityCheck {
    pub conjugates: usize,
    pub norm: BigRational,
    pub holds: bool,
}

impl fmt::Display for OrdinarityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conjugates={} norm={} holds={}", self.conjugates, self.norm, self.holds)
    }
}

/// Every Galois conjugate of `a_p` is a p-adic unit at every place.
///
/// For an algebraic integer this holds exactly when the norm of its orbit
/// is prime to p, since the valuations are non-negative and sum to the
/// valuation of the norm.
pub fn conjugate_ordinarity_check(f: &Eigensystem) -> Result<OrdinarityCheck, ModformsError> {
    if f.weight() != 1 {
        return Err(ModformsError::DomainError("conjugate ordinarity is a weight-one statement".into()));
    }
    let p = f.p();
    let ap = f.require(p)?;
    if is_zero_int(ap) {
        return Err(ModformsError::ZeroUpEigenvalue);
    }
    let orbit = ap.galois_orbit(1)?;
    if ap.coeffs().iter().all(|c| c % p as i64 == 0) {
        return Ok(OrdinarityCheck { conjugates: orbit.len(), norm: BigRational::zero(), holds: false });
    }
    let n = ap.conductor();
    let prod = orbit.iter().fold(CycloNum::one(n), |acc, x| acc.mul_ref(&x.to_num()));
    let norm = prod
        .normalize_conductor()
        .as_rational()
        .ok_or_else(|| ModformsError::DomainError("orbit product is not rational".into()))?;
    let holds = !(norm.numer() % BigInt::from(p)).is_zero();
    Ok(OrdinarityCheck { conjugates: orbit.len(), norm, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeDegree {
    pub degree: u64,
    /// Conductor of the character field Q(ε) the degree is taken over.
    pub base: u64,
    pub bound: Option<u64>,
}

impl HeckeDegree {
    pub fn within_bound(&self) -> Option<bool> {
        self.bound.map(|r| self.degree <= r)
    }
}

impl fmt::Display for HeckeDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree={} over=Q(ζ_{})", self.degree, self.base)?;
        if let (Some(r), Some(ok)) = (self.bound, self.within_bound()) {
            write!(f, " bound={r} within={ok}")?;
        }
        Ok(())
    }
}

/// `[Q(ε)({a_n}) : Q(ε)]`, the index of the common stabilizer of all stored
/// coefficients inside Gal(Q(ζ_N)/Q(ε)).
pub fn hecke_field_degree(f: &Eigensystem, bound: Option<u64>) -> Result<HeckeDegree, ModformsError> {
    if f.is_stabilized() {
        return Err(ModformsError::NonCyclotomicCoefficients(
            "the stabilized U_p eigenvalue is only known p-adically".into(),
        ));
    }
    let base = f.nebentypus().field_conductor();
    let n = f.coeffs().values().fold(base, |acc, c| lcm(acc, c.conductor()));
    let coeffs: Vec<CycloInt> = f.coeffs().values().map(|c| c.embed(n)).collect::<Result<_, _>>()?;
    let group = fixing_group(n, base);
    let stab = group.iter().filter(|&&s| coeffs.iter().all(|c| c.galois(s as i64) == *c)).count();
    Ok(HeckeDegree { degree: (group.len() / stab) as u64, base, bound })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::modforms::{theta_build, HeckeCharData, NebenChar};

    fn gaussian() -> Eigensystem {
        theta_build(&HeckeCharData::canonical(4).unwrap(), 5, 120).unwrap()
    }

    fn synthetic(p: u64, k: u32, entries: &[(u64, CycloInt)]) -> Eigensystem {
        let coeffs: BTreeMap<u64, CycloInt> = entries.iter().cloned().collect();
        Eigensystem::new(p, 1, k, NebenChar::trivial(1), coeffs).unwrap()
    }

    #[test]
    fn ramanujan_on_theta() {
        let f = gaussian();
        let r = ramanujan_check(&f, 5).unwrap();
        assert!(r.holds);
        assert_eq!(r.method, BoundMethod::Exact(BigRational::from_integer(4.into())));
        for l in (3..120).filter(|&l| is_prime(l)) {
            assert!(ramanujan_check(&f, l).unwrap().holds);
            assert!(trivial_bound_check(&f, l).unwrap().holds);
        }
        let big = synthetic(5, 1, &[(3, CycloInt::from_int(1, 27))]);
        assert!(!trivial_bound_check(&big, 3).unwrap().holds);
        let zeta = synthetic(5, 1, &[(7, CycloInt::root(5, 2))]);
        assert!(trivial_bound_check(&zeta, 7).unwrap().holds);
    }

    #[test]
    fn interval_path() {
        // 1 + ζ_5 has |·|² ∈ {φ², φ^{-2}}, irrational.
        let x = CycloInt::from_terms(5, [(0, 1), (1, 1)]).to_num();
        let (ok, m) = house_sq_le(&x, &BigInt::from(3)).unwrap();
        assert!(ok && matches!(m, BoundMethod::Interval(_)));
        let (ok, _) = house_sq_le(&x, &BigInt::from(2)).unwrap();
        assert!(!ok);
    }

    #[test]
    fn cm_vanishing() {
        let f = gaussian();
        let e = ImagQuadField::new(4).unwrap();
        assert!(cm_check(&f, e).unwrap().holds());
        let fake = f.with_coeff(3, CycloInt::one(1));
        assert_eq!(cm_check(&fake, e).unwrap().failures, vec![3]);
        let tiny = synthetic(5, 2, &[(1, CycloInt::one(1)), (2, CycloInt::zero(1))]);
        let c = cm_check(&tiny, e).unwrap();
        assert!(c.holds() && c.warning.is_some());
    }

    #[test]
    fn stabilization_and_slope() {
        let f = gaussian();
        let v = Place::new(5, 1).unwrap();
        let g = p_stabilize(&f, v, 30).unwrap();
        assert_eq!(g.level(), 160);
        let up = &g.stabilization().unwrap().up;
        assert!(up.is_unit());
        // U_p² + 2U_p + 5 = 0.
        let lhs = up.mul_ref(up).add_ref(&up.mul_int(&2.into())).add_ref(&PadicNum::from_int(5, 5, 30));
        assert!(lhs.is_zero());
        let s = slope_check(&g, v, 30).unwrap();
        assert!(s.holds && s.slope.is_zero());
        let bad = synthetic(5, 2, &[(5, CycloInt::from_int(1, 5))]);
        assert!(matches!(p_stabilize(&bad, v, 30), Err(ModformsError::NoUnitRoot)));
        let steep = Eigensystem::new(5, 5, 3, NebenChar::trivial(1), [(5, CycloInt::from_int(1, 125))].into()).unwrap();
        assert!(!slope_check(&steep, v, 30).unwrap().holds);
    }

    #[test]
    fn conjugate_ordinarity() {
        let unit = synthetic(7, 1, &[(7, CycloInt::from_terms(3, [(0, 1), (1, 1)]))]);
        let c = conjugate_ordinarity_check(&unit).unwrap();
        assert!(c.holds);
        assert_eq!(c.conjugates, 2);
        let root = synthetic(7, 1, &[(7, CycloInt::root(12, 5))]);
        assert!(conjugate_ordinarity_check(&root).unwrap().holds);
        let non = synthetic(7, 1, &[(7, CycloInt::from_terms(3, [(0, 2), (1, -1)]))]);
        assert!(!conjugate_ordinarity_check(&non).unwrap().holds);
    }

    #[test]
    fn degrees() {
        let rational = synthetic(5, 2, &[(2, CycloInt::from_int(1, 3)), (3, CycloInt::from_int(1, -1))]);
        assert_eq!(hecke_field_degree(&rational, None).unwrap().degree, 1);
        let z5 = synthetic(5, 1, &[(2, CycloInt::root(5, 1))]);
        let d = hecke_field_degree(&z5, Some(3)).unwrap();
        assert_eq!(d.degree, 4);
        assert_eq!(d.within_bound(), Some(false));
        let theta = hecke_field_degree(&gaussian(), None).unwrap();
        assert!(theta.degree <= 2);
    }
}
