use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use super::character::{HeckeCharData, NebenChar};
use super::place::Place;
use super::ModformsError;
use crate::arith::{gcd, is_prime};
use crate::cyclo::{parse_cyclo_int, CycloInt, QuadCycloNum, RootOfUnity};
use crate::padic::{text, PadicNum};

/// A p-stabilized U_p eigenvalue, known p-adically under a fixed place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub place: Place,
    pub up: PadicNum,
}

/// Hecke eigenvalues `a_n` of a normalized eigenform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigensystem {
    p: u64,
    level: u64,
    weight: u32,
    nebentypus: NebenChar,
    coeffs: BTreeMap<u64, CycloInt>,
    stabilized: Option<Stabilization>,
}

impl Eigensystem {
    pub fn new(
        p: u64,
        level: u64,
        weight: u32,
        nebentypus: NebenChar,
        coeffs: BTreeMap<u64, CycloInt>,
    ) -> Result<Self, ModformsError> {
        if weight < 1 {
            return Err(ModformsError::DomainError("weight must be at least 1".into()));
        }
        if level == 0 || !level.is_multiple_of(nebentypus.modulus()) {
            return Err(ModformsError::DomainError(format!(
                "character modulus {} does not divide the level {level}",
                nebentypus.modulus()
            )));
        }
        if coeffs.contains_key(&0) {
            return Err(ModformsError::DomainError("coefficients are indexed from 1".into()));
        }
        let coeffs = coeffs.into_iter().map(|(n, c)| (n, c.normalize_conductor())).collect();
        Ok(Eigensystem { p, level, weight, nebentypus, coeffs, stabilized: None })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn nebentypus(&self) -> &NebenChar {
        &self.nebentypus
    }

    pub fn coeffs(&self) -> &BTreeMap<u64, CycloInt> {
        &self.coeffs
    }

    pub fn coeff(&self, n: u64) -> Option<&CycloInt> {
        self.coeffs.get(&n)
    }

    pub fn require(&self, n: u64) -> Result<&CycloInt, ModformsError> {
        self.coeff(n).ok_or(ModformsError::MissingCoefficient(n))
    }

    /// Largest index with a stored coefficient.
    pub fn bound(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn stabilization(&self) -> Option<&Stabilization> {
        self.stabilized.as_ref()
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilized.is_some()
    }

    pub(crate) fn with_stabilization(mut self, s: Stabilization) -> Self {
        self.coeffs.remove(&self.p);
        self.level *= self.p;
        self.stabilized = Some(s);
        self
    }

    pub fn with_coeff(&self, n: u64, v: CycloInt) -> Self {
        let mut out = self.clone();
        out.coeffs.insert(n, v.normalize_conductor());
        out
    }

    /// `ε(ℓ)·ℓ^{k−1}`, zero when ℓ divides the character modulus.
    pub fn hecke_constant(&self, l: u64) -> CycloInt {
        let scale = (l as i64).checked_pow(self.weight - 1).expect("ℓ^{k−1} overflows i64");
        self.nebentypus.value_cyclo(l as i64).scale(&scale)
    }

    /// Coprime pairs `(m, n)`, `mn ≤ bound`, where `a_{mn} ≠ a_m a_n`.
    pub fn multiplicativity_failures(&self, bound: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for m in 2..=bound {
            for n in m + 1..=bound / m {
                if gcd(m, n) != 1 {
                    continue;
                }
                let (Some(am), Some(an), Some(amn)) = (self.coeff(m), self.coeff(n), self.coeff(m * n)) else {
                    continue;
                };
                if !amn.value_eq(&am.mul_ref(an)) {
                    out.push((m, n));
                }
            }
        }
        out
    }

    /// Primes ℓ with `ℓ² ≤ bound` where `a_{ℓ²} ≠ a_ℓ² − ε(ℓ)ℓ^{k−1}`.
    pub fn recurrence_failures(&self, bound: u64) -> Vec<u64> {
        (2..)
            .take_while(|l| l * l <= bound)
            .filter(|&l| is_prime(l))
            .filter(|&l| {
                let (Some(al), Some(al2)) = (self.coeff(l), self.coeff(l * l)) else {
                    return false;
                };
                !al2.value_eq(&al.mul_ref(al).sub_ref(&self.hecke_constant(l)))
            })
            .collect()
    }

    /// Header `p N k eps_modulus eps_gens`, then `n: value` lines and, when
    /// stabilized, a `U_p:` line.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {} {} {}\n",
            self.p,
            self.level,
            self.weight,
            self.nebentypus.modulus(),
            self.nebentypus.gens_text()
        );
        for (n, c) in &self.coeffs {
            let _ = writeln!(s, "{n}: {c}");
        }
        if let Some(st) = &self.stabilized {
            let _ = writeln!(s, "U_p: place={} {}", st.place.index(), st.up);
        }
        s
    }

    pub fn parse_text(src: &str) -> Result<Self, ModformsError> {
        let mut lines = src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| ModformsError::Parse("empty eigensystem file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(ModformsError::Parse(format!("expected `p N k eps_modulus eps_gens`, got {header:?}")));
        }
        let num = |s: &str| -> Result<u64, ModformsError> {
            s.parse().map_err(|_| ModformsError::Parse(format!("not an integer: {s:?}")))
        };
        let (p, level, weight, modulus) = (num(fields[0])?, num(fields[1])?, num(fields[2])?, num(fields[3])?);
        let eps = NebenChar::parse(modulus, fields[4])?;
        let mut coeffs = BTreeMap::new();
        let mut up = None;
        for line in lines {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| ModformsError::Parse(format!("expected `n: value`, got {line:?}")))?;
            if key.trim() == "U_p" {
                let rest = value.trim();
                let (place, body) = rest
                    .strip_prefix("place=")
                    .and_then(|r| r.split_once(' '))
                    .ok_or_else(|| ModformsError::Parse(format!("malformed U_p line: {line:?}")))?;
                let t = num(place)?;
                up = Some(Stabilization { place: Place::new(p, t)?, up: text::parse(body.trim())? });
                continue;
            }
            let n = num(key.trim())?;
            coeffs.insert(n, parse_coefficient(value.trim())?);
        }
        let weight = u32::try_from(weight).map_err(|_| ModformsError::Parse("weight too large".into()))?;
        let mut f = Eigensystem::new(p, level, weight, eps, coeffs)?;
        if let Some(st) = up {
            if f.level % p != 0 {
                return Err(ModformsError::Parse("a stabilized system has p | N".into()));
            }
            f.coeffs.remove(&p);
            f.stabilized = Some(st);
        }
        Ok(f)
    }
}

/// A coefficient written either as `n; c0,…` or as `m; d; a…; b…`.
pub fn parse_coefficient(s: &str) -> Result<CycloInt, ModformsError> {
    if s.matches(';').count() == 3 {
        let q = QuadCycloNum::parse(s)?;
        return q
            .to_cyclo()
            .to_int()
            .ok_or_else(|| ModformsError::Parse(format!("coefficient is not integral: {s:?}")));
    }
    Ok(parse_cyclo_int(s)?)
}

/// The θ-series `Σ_𝔞 ψ(𝔞) q^{Norm 𝔞}`, coefficients `a_1 … a_bound`.
///
/// Ideals are enumerated as elements up to units; every ideal is reached
/// once per unit with the same value, so the sums are divided by the unit
/// count.
pub fn theta_build(psi: &HeckeCharData, p: u64, coeff_bound: u64) -> Result<Eigensystem, ModformsError> {
    if coeff_bound < 2 {
        return Err(ModformsError::DomainError("coefficient bound must be at least 2".into()));
    }
    let field = psi.field();
    let conductor = crate::arith::lcm(field.disc(), psi.eta_order());
    let mut sums: BTreeMap<u64, CycloInt> = (1..=coeff_bound).map(|n| (n, CycloInt::zero(conductor))).collect();
    for a in field.elements_up_to(coeff_bound) {
        if let Some(v) = psi.psi(a) {
            let n = field.norm(a) as u64;
            let slot = sums.get_mut(&n).expect("norm within bound");
            *slot = slot.add_ref(&v.embed(conductor)?);
        }
    }
    let w = field.unit_count() as i64;
    let mut coeffs = BTreeMap::new();
    for (n, s) in sums {
        if s.coeffs().iter().any(|c| c % w != 0) {
            return Err(ModformsError::IllDefinedCharacter(format!(
                "ψ is not constant on the generators of ideals of norm {n}"
            )));
        }
        coeffs.insert(n, s.map_coeffs(|c| c / w));
    }
    debug_assert!(coeffs[&1].value_eq(&CycloInt::one(1)));
    Eigensystem::new(p, psi.level(), psi.weight(), psi.nebentypus(), coeffs)
}

/// `ε(ℓ)` as a root of unity, or an error when ℓ divides the modulus.
pub(crate) fn eps_root(f: &Eigensystem, l: u64) -> Result<RootOfUnity, ModformsError> {
    f.nebentypus().value(l as i64).ok_or_else(|| ModformsError::DomainError(format!("ε({l}) = 0")))
}

pub(crate) fn is_zero_int(x: &CycloInt) -> bool {
    x.coeffs().iter().all(Zero::is_zero)
}
