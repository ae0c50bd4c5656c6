use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use super::quadratic::{ImagQuadField, QuadInt, ResidueRing};
use super::ModformsError;
use crate::arith::{gcd, kronecker, lcm, primitive_root};
use crate::cyclo::{CycloInt, RootOfUnity};

/// A Dirichlet character, stored as a value table on (Z/N)^× together with
/// a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NebenChar {
    modulus: u64,
    gens: Vec<(u64, RootOfUnity)>,
    table: Vec<Option<RootOfUnity>>,
}

impl NebenChar {
    pub fn trivial(modulus: u64) -> Self {
        Self::from_fn(modulus, |_| RootOfUnity::one())
    }

    /// Build from images of generators, checking that they determine a
    /// well-defined character on all of (Z/N)^×.
    pub fn from_generators(modulus: u64, gens: &[(u64, RootOfUnity)]) -> Result<Self, ModformsError> {
        if modulus == 0 {
            return Err(ModformsError::DomainError("modulus must be positive".into()));
        }
        let mut table: Vec<Option<RootOfUnity>> = vec![None; modulus as usize];
        let one = 1 % modulus;
        table[one as usize] = Some(RootOfUnity::one());
        let mut queue = VecDeque::from([one]);
        while let Some(x) = queue.pop_front() {
            let vx = table[x as usize].unwrap();
            for &(g, vg) in gens {
                if gcd(g % modulus, modulus) != 1 {
                    return Err(ModformsError::IllDefinedCharacter(format!(
                        "generator {g} is not a unit mod {modulus}"
                    )));
                }
                let y = (x as u128 * g as u128 % modulus as u128) as u64;
                let vy = vx.mul(&vg);
                match table[y as usize] {
                    Some(old) if old != vy => {
                        return Err(ModformsError::IllDefinedCharacter(format!(
                            "conflicting values at {y} mod {modulus}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        table[y as usize] = Some(vy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let units = (0..modulus).filter(|&a| gcd(a, modulus) == 1).count();
        if table.iter().filter(|v| v.is_some()).count() != units {
            return Err(ModformsError::IllDefinedCharacter(format!("generators do not span (Z/{modulus})^×")));
        }
        Ok(NebenChar { modulus, gens: gens.iter().map(|&(g, v)| (g % modulus, v.reduced())).collect(), table })
    }

    /// Tabulate a character given by a function on residues coprime to N.
    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> RootOfUnity) -> Self {
        let table: Vec<Option<RootOfUnity>> =
            (0..modulus).map(|a| (gcd(a, modulus) == 1).then(|| f(a).reduced())).collect();
        // Greedy generating set: add any unit outside the current span.
        let mut span = vec![false; modulus as usize];
        span[(1 % modulus) as usize] = true;
        let mut gens = Vec::new();
        for a in 0..modulus {
            if table[a as usize].is_none() || span[a as usize] {
                continue;
            }
            gens.push((a, table[a as usize].unwrap()));
            loop {
                let before = span.iter().filter(|&&s| s).count();
                for x in 0..modulus {
                    if span[x as usize] {
                        for &(g, _) in &gens {
                            span[(x * g % modulus) as usize] = true;
                        }
                    }
                }
                if span.iter().filter(|&&s| s).count() == before {
                    break;
                }
            }
        }
        NebenChar { modulus, gens, table }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[(u64, RootOfUnity)] {
        &self.gens
    }

    /// `ε(n)`, or `None` when `gcd(n, N) > 1`.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.table[r]
    }

    /// `ε(n)` as a cyclotomic integer, zero off the units.
    pub fn value_cyclo(&self, n: i64) -> CycloInt {
        match self.value(n) {
            Some(z) => z.to_cyclo(),
            None => CycloInt::zero(1),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().flatten().all(|z| z.order() == 1)
    }

    /// Lcm of the orders of the values.
    pub fn order(&self) -> u64 {
        self.table.iter().flatten().fold(1, |acc, z| lcm(acc, z.order()))
    }

    /// Conductor of the character field Q(ε) = Q(ζ_o).
    pub fn field_conductor(&self) -> u64 {
        let o = self.order();
        if o % 4 == 2 {
            o / 2
        } else {
            o
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ModformsError> {
        if self.modulus != o.modulus {
            return Err(ModformsError::DomainError("characters have different moduli".into()));
        }
        Ok(Self::from_fn(self.modulus, |a| self.value(a as i64).unwrap().mul(&o.value(a as i64).unwrap())))
    }

    /// Generators as `g=n:a,…`, or `none`.
    pub fn gens_text(&self) -> String {
        if self.gens.is_empty() {
            return "none".into();
        }
        let parts: Vec<String> = self.gens.iter().map(|(g, z)| format!("{g}={z}")).collect();
        parts.join(",")
    }

    pub fn parse(modulus: u64, gens: &str) -> Result<Self, ModformsError> {
        let bad = || ModformsError::Parse(format!("malformed character generators: {gens:?}"));
        if gens == "none" {
            return Self::from_generators(modulus, &[]);
        }
        let mut list = Vec::new();
        for part in gens.split(',') {
            let (g, z) = part.split_once('=').ok_or_else(bad)?;
            let (n, a) = z.split_once(':').ok_or_else(bad)?;
            let g: u64 = g.trim().parse().map_err(|_| bad())?;
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            list.push((g, RootOfUnity::new(n, a)));
        }
        Self::from_generators(modulus, &list)
    }
}

impl fmt::Display for NebenChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {} [{}]", self.modulus, self.gens_text())
    }
}

/// An algebraic Hecke character `ψ((α)) = η(α)·α^{k−1}` of an imaginary
/// quadratic field of class number one, with finite part η on (O/𝔪)^×.
#[derive(Clone, Debug)]
pub struct HeckeCharData {
    field: ImagQuadField,
    ring: ResidueRing,
    weight: u32,
    eta: BTreeMap<QuadInt, RootOfUnity>,
    omega: CycloInt,
}

impl HeckeCharData {
    /// Build η from images of generators of (O/𝔪)^×, then check that the
    /// character descends to principal ideals.
    pub fn new(
        field: ImagQuadField,
        modulus: QuadInt,
        weight: u32,
        gens: &[(QuadInt, RootOfUnity)],
    ) -> Result<Self, ModformsError> {
        if weight < 1 {
            return Err(ModformsError::DomainError("weight must be at least 1".into()));
        }
        let ring = ResidueRing::new(field, modulus)?;
        let mut eta = BTreeMap::new();
        let one = ring.reduce(QuadInt::int(1));
        eta.insert(one, RootOfUnity::one());
        let mut queue = VecDeque::from([one]);
        while let Some(x) = queue.pop_front() {
            let vx = eta[&x];
            for &(g, vg) in gens {
                if !ring.is_unit(g) {
                    return Err(ModformsError::IllDefinedCharacter(format!(
                        "generator {g} is not prime to the conductor"
                    )));
                }
                let y = ring.mul(x, g);
                let vy = vx.mul(&vg);
                match eta.get(&y) {
                    Some(old) if *old != vy => {
                        return Err(ModformsError::IllDefinedCharacter(format!(
                            "η takes two values on the class of {y}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        eta.insert(y, vy);
                        queue.push_back(y);
                    }
                }
            }
        }
        if eta.len() != ring.units().len() {
            return Err(ModformsError::IllDefinedCharacter("generators do not span (O/𝔪)^×".into()));
        }
        let omega = field.omega_cyclo();
        let psi = HeckeCharData { field, ring, weight, eta, omega };
        for u in field.units() {
            let eu = psi.eta(u).expect("units are prime to 𝔪").to_cyclo::<i64>();
            let check = eu.mul_ref(&psi.embed(u).pow(weight as u64 - 1));
            if !check.value_eq(&CycloInt::one(1)) {
                return Err(ModformsError::IllDefinedCharacter(format!(
                    "η({u})·{u}^{} ≠ 1, so ψ is not defined on ideals",
                    weight - 1
                )));
            }
        }
        Ok(psi)
    }

    /// η on units forced by compatibility: `η(u) = u^{−(k−1)}`. Valid when
    /// the units generate (O/𝔪)^×.
    pub fn from_units(field: ImagQuadField, modulus: QuadInt, weight: u32) -> Result<Self, ModformsError> {
        let gens: Vec<(QuadInt, RootOfUnity)> = field
            .units()
            .into_iter()
            .map(|u| {
                let z = field.unit_root(u).expect("unit is a root of unity");
                (u, z.pow(-(weight as i64 - 1)))
            })
            .collect();
        Self::new(field, modulus, weight, &gens)
    }

    /// A weight-two character attached to a CM elliptic curve over Q.
    pub fn canonical(disc: u64) -> Result<Self, ModformsError> {
        let field = ImagQuadField::new(disc)?;
        match disc {
            4 => Self::from_units(field, QuadInt::new(-2, 2), 2),
            3 => Self::from_units(field, QuadInt::int(3), 2),
            8 => Err(ModformsError::Unsupported("no built-in character for D = 8; supply generators".into())),
            _ => {
                // 𝔪 = (√−D) with η the quadratic character of O/𝔪 ≅ F_D.
                let g = primitive_root(disc) as i64;
                let gens = [(QuadInt::int(-1), RootOfUnity::new(2, 1)), (QuadInt::int(g), RootOfUnity::new(2, 1))];
                Self::new(field, QuadInt::new(-1, 2), 2, &gens)
            }
        }
    }

    pub fn field(&self) -> ImagQuadField {
        self.field
    }

    pub fn modulus(&self) -> QuadInt {
        self.ring.generator()
    }

    pub fn modulus_norm(&self) -> u64 {
        self.ring.size()
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Level of the theta series, `D·Norm(𝔪)`.
    pub fn level(&self) -> u64 {
        self.field.disc() * self.modulus_norm()
    }

    pub fn embed(&self, a: QuadInt) -> CycloInt {
        self.field.to_cyclo_with(&self.omega, a)
    }

    /// η(α), or `None` when α is not prime to 𝔪.
    pub fn eta(&self, a: QuadInt) -> Option<RootOfUnity> {
        self.eta.get(&self.ring.reduce(a)).copied()
    }

    /// Lcm of the orders of the values of η.
    pub fn eta_order(&self) -> u64 {
        self.eta.values().fold(1, |acc, z| lcm(acc, z.order()))
    }

    /// ψ((α)) = η(α)·α^{k−1}, or `None` when α is not prime to 𝔪.
    pub fn psi(&self, a: QuadInt) -> Option<CycloInt> {
        let e = self.eta(a)?;
        Some(e.to_cyclo::<i64>().mul_ref(&self.embed(a).pow(self.weight as u64 - 1)))
    }

    /// The nebentypus χ_E·η restricted to Z, modulo the level.
    pub fn nebentypus(&self) -> NebenChar {
        let disc = self.field.disc() as i64;
        NebenChar::from_fn(self.level(), |n| {
            let chi = kronecker(-disc, n);
            let eta = self.eta(QuadInt::int(n as i64)).unwrap_or(RootOfUnity::one());
            let sign = if chi == -1 { RootOfUnity::new(2, 1) } else { RootOfUnity::one() };
            sign.mul(&eta)
        })
    }
}

impl fmt::Display for HeckeCharData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "D={} modulus={} norm={} weight={}",
            self.field.disc(),
            self.modulus(),
            self.modulus_norm(),
            self.weight
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_generators() {
        let chi = NebenChar::from_generators(5, &[(2, RootOfUnity::new(4, 1))]).unwrap();
        assert_eq!(chi.value(4), Some(RootOfUnity::new(2, 1)));
        assert_eq!(chi.value(3), Some(RootOfUnity::new(4, 3)));
        assert_eq!(chi.value(10), None);
        assert_eq!(chi.field_conductor(), 4);
        assert!(NebenChar::from_generators(5, &[(4, RootOfUnity::new(2, 1))]).is_err());
        assert!(NebenChar::from_generators(5, &[(2, RootOfUnity::new(3, 1))]).is_err());
        let text = chi.gens_text();
        assert_eq!(NebenChar::parse(5, &text).unwrap(), chi);
    }

    #[test]
    fn greedy_generators_reproduce_table() {
        let chi = NebenChar::from_fn(32, |a| RootOfUnity::new(2, if kronecker(-4, a) == -1 { 1 } else { 0 }));
        let again = NebenChar::from_generators(32, chi.generators()).unwrap();
        assert_eq!(again, chi);
        assert_eq!(chi.field_conductor(), 1);
    }

    #[test]
    fn gaussian_character() {
        let psi = HeckeCharData::canonical(4).unwrap();
        assert_eq!(psi.level(), 32);
        assert!(psi.nebentypus().is_trivial());
        // ψ((2+i)) uses the generator ≡ 1 mod (1+i)³, which is −1+2i.
        let v = psi.psi(QuadInt::new(2, 1)).unwrap();
        assert!(v.value_eq(&psi.embed(QuadInt::new(-1, 2))));
        assert!(psi.psi(QuadInt::new(1, 1)).is_none());
    }

    #[test]
    fn unit_compatibility_enforced() {
        let e = ImagQuadField::new(4).unwrap();
        // Trivial η at weight 2 would need ψ(i·α) = ψ(α)·i.
        assert!(matches!(
            HeckeCharData::new(e, QuadInt::new(-2, 2), 2, &[]),
            Err(ModformsError::IllDefinedCharacter(_))
        ));
        assert!(HeckeCharData::new(e, QuadInt::int(1), 5, &[]).is_ok());
        for d in [3, 7, 11, 19, 43, 67, 163] {
            let psi = HeckeCharData::canonical(d).unwrap();
            assert!(psi.nebentypus().is_trivial(), "D={d}");
        }
    }
}
