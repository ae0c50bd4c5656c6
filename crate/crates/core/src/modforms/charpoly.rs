use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::bounds::{house_sq_le, BoundMethod};
use super::character::HeckeCharData;
use super::quadratic::Splitting;
use super::ModformsError;
use crate::arith::lcm;
use crate::cyclo::{fixing_group, CycloInt, CycloNum, QuadCycloNum};

/// The two roots of `x² − a_ℓx + ε(ℓ)ℓ^{k−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusPair {
    pub ell: u64,
    pub alpha: QuadCycloNum,
    pub beta: QuadCycloNum,
}

impl FrobeniusPair {
    pub fn new(ell: u64, alpha: QuadCycloNum, beta: QuadCycloNum) -> Self {
        FrobeniusPair { ell, alpha, beta }
    }

    /// `ψ(𝔩)` and `ψ(𝔩̄)` for a prime ℓ split in E and prime to 𝔪.
    pub fn from_psi(psi: &HeckeCharData, ell: u64) -> Result<Self, ModformsError> {
        let field = psi.field();
        match field.splitting(ell) {
            Splitting::Inert => return Err(ModformsError::InertPrime(ell)),
            Splitting::Ramified => return Err(ModformsError::RamifiedPrime(ell)),
            Splitting::Split => {}
        }
        let a = field.element_of_norm(ell).expect("split primes have generators");
        let lift = |x| {
            psi.psi(x)
                .map(|v| QuadCycloNum::from_cyclo(v.conductor(), field.d(), &v.to_num()).expect("squarefree d"))
                .ok_or(ModformsError::RamifiedPrime(ell))
        };
        Ok(FrobeniusPair::new(ell, lift(a)?, lift(field.conj(a))?))
    }

    pub fn trace(&self) -> CycloNum {
        self.alpha.to_cyclo().add_ref(&self.beta.to_cyclo())
    }

    pub fn det(&self) -> CycloNum {
        self.alpha.to_cyclo().mul_ref(&self.beta.to_cyclo())
    }

    fn roots(&self) -> [CycloNum; 2] {
        [self.alpha.to_cyclo(), self.beta.to_cyclo()]
    }

    /// Conjugates of the pair under Gal(Q(ζ_N)/Q(ζ_base)), one per distinct
    /// unordered pair, starting with `self`.
    pub fn orbit(&self, base: u64) -> Vec<FrobeniusPair> {
        let [a, b] = self.roots();
        let n = lcm(lcm(a.conductor(), b.conductor()), base);
        let (a, b) = (a.embed(n).unwrap(), b.embed(n).unwrap());
        let d = self.alpha.d();
        let mut out: Vec<(CycloNum, CycloNum)> = Vec::new();
        for s in fixing_group(n, base) {
            let (x, y) = (a.galois(s as i64), b.galois(s as i64));
            if !out.iter().any(|(u, v)| (*u == x && *v == y) || (*u == y && *v == x)) {
                out.push((x, y));
            }
        }
        out.into_iter()
            .map(|(x, y)| {
                let lift = |z: &CycloNum| QuadCycloNum::from_cyclo(n, d, z).expect("squarefree d");
                FrobeniusPair::new(self.ell, lift(&x), lift(&y))
            })
            .collect()
    }
}

/// `A_ℓ(X) = Σ_j A_{ℓ,j} X^j`, monic of degree 2m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyCoeffs {
    pub ell: u64,
    /// Coefficients of `X^0, …, X^{2m}`.
    pub coeffs: Vec<CycloInt>,
}

impl CharPolyCoeffs {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn m(&self) -> usize {
        self.degree() / 2
    }
}

impl fmt::Display for CharPolyCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ell: {}", self.ell)?;
        writeln!(f, "degree: {}", self.degree())?;
        for (j, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "A_{j}: {c}")?;
        }
        Ok(())
    }
}

/// The characteristic polynomial of `⊕ r(Frob_ℓ)` over a Galois orbit of
/// Frobenius pairs: power sums are converted to elementary symmetric
/// functions by Newton's identities, then compared with the direct product
/// `Π (X − α_i)(X − β_i)` and checked for invariance under Gal(·/Q(ζ_base)).
pub fn charpoly_from_conjugates(pairs: &[FrobeniusPair], base: u64) -> Result<CharPolyCoeffs, ModformsError> {
    let first = pairs.first().ok_or_else(|| ModformsError::DomainError("need at least one Frobenius pair".into()))?;
    if pairs.iter().any(|fp| fp.ell != first.ell) {
        return Err(ModformsError::DomainError("pairs belong to different primes".into()));
    }
    let roots: Vec<CycloNum> = pairs.iter().flat_map(FrobeniusPair::roots).collect();
    let n = roots.iter().fold(base.max(1), |acc, r| lcm(acc, r.conductor()));
    let roots: Vec<CycloNum> = roots.iter().map(|r| r.embed(n)).collect::<Result<_, _>>()?;
    let deg = roots.len();

    // Power sums s_1 … s_{2m}.
    let mut powers = roots.clone();
    let mut sums = Vec::with_capacity(deg);
    for j in 0..deg {
        if j > 0 {
            for (pw, r) in powers.iter_mut().zip(&roots) {
                *pw = pw.mul_ref(r);
            }
        }
        sums.push(powers.iter().fold(CycloNum::zero(n), |acc, x| acc.add_ref(x)));
    }
    // j·e_j = Σ_{i=1}^{j} (−1)^{i−1} e_{j−i} s_i.
    let mut e = vec![CycloNum::one(n)];
    for j in 1..=deg {
        let mut acc = CycloNum::zero(n);
        for i in 1..=j {
            let t = e[j - i].mul_ref(&sums[i - 1]);
            acc = if i % 2 == 1 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
        }
        e.push(acc.scale(&BigRational::new(1.into(), (j as i64).into())));
    }
    // A_{2m−j} = (−1)^j e_j.
    let newton: Vec<CycloNum> = (0..=deg)
        .map(|c| {
            let j = deg - c;
            if j.is_multiple_of(2) {
                e[j].clone()
            } else {
                e[j].neg_ref()
            }
        })
        .collect();

    let mut direct = vec![CycloNum::one(n)];
    for r in &roots {
        let mut next = vec![CycloNum::zero(n); direct.len() + 1];
        for (i, c) in direct.iter().enumerate() {
            next[i + 1] = next[i + 1].add_ref(c);
            next[i] = next[i].sub_ref(&c.mul_ref(r));
        }
        direct = next;
    }
    if let Some(j) = (0..=deg).find(|&j| newton[j] != direct[j]) {
        return Err(ModformsError::CrossCheck(format!("Newton identities and the direct product disagree at X^{j}")));
    }
    for s in fixing_group(n, base.max(1)) {
        if let Some(j) = (0..=deg).find(|&j| newton[j].galois(s as i64) != newton[j]) {
            return Err(ModformsError::NotAFullOrbit { index: j, automorphism: s });
        }
    }
    let coeffs = newton
        .iter()
        .enumerate()
        .map(|(j, c)| {
            c.normalize_conductor().to_int().ok_or_else(|| ModformsError::DomainError(format!("A_{j} is not integral")))
        })
        .collect::<Result<_, _>>()?;
    Ok(CharPolyCoeffs { ell: first.ell, coeffs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HouseBound {
    pub j: usize,
    /// `C_{ℓ,j}²`.
    pub bound_sq: BigInt,
    pub method: BoundMethod,
    pub holds: bool,
}

impl fmt::Display for HouseBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j={} C^2={} holds={} {}", self.j, self.bound_sq, self.holds, self.method)
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `C_{ℓ,j} = binom(2m, 2m−j)·(2ℓ^{k/2+1})^{2m−j}`, compared in squared
/// form with the house of each `A_{ℓ,j}`.
pub fn charpoly_house_bounds(cp: &CharPolyCoeffs, k: u32) -> Result<Vec<HouseBound>, ModformsError> {
    let deg = cp.degree() as u64;
    let l = BigInt::from(cp.ell);
    cp.coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let i = deg - j as u64;
            let b = binomial(deg, i);
            let bound_sq = &b * &b * BigInt::from(4).pow(i as u32) * l.pow((k + 2) * i as u32);
            let (holds, method) = house_sq_le(&a.to_num(), &bound_sq)?;
            Ok(HouseBound { j, bound_sq, method, holds })
        })
        .collect()
}
