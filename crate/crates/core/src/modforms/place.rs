use std::fmt;

use num_rational::BigRational;

use super::ModformsError;
use crate::arith::{factor, gcd, mod_inv, mod_pow, primitive_root};
use crate::cyclo::{CycloInt, CycloNum, RootOfUnity};
use crate::padic::{check_prime, PadicCyclo, PadicNum};

/// A fixed embedding of Q(ζ_{p^r·M}) into Q_p(ζ_{p^r}), available when
/// `M | p − 1`: `ζ_M ↦ ω(g)^{t(p−1)/M}` for the least primitive root g
/// and a chosen `t` prime to `p − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    p: u64,
    t: u64,
}

impl Place {
    pub fn new(p: u64, t: u64) -> Result<Self, ModformsError> {
        check_prime(p)?;
        if gcd(t % (p - 1), p - 1) != 1 {
            return Err(ModformsError::DomainError(format!("place index {t} is not prime to {}", p - 1)));
        }
        Ok(Place { p, t: t % (p - 1) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn index(&self) -> u64 {
        self.t
    }

    /// `(r, M)` with `n = p^r·M`, if Q(ζ_n) embeds at this place.
    fn split_conductor(&self, n: u64) -> Result<(u32, u64), ModformsError> {
        let mut m = n;
        let mut r = 0;
        while m.is_multiple_of(self.p) {
            m /= self.p;
            r += 1;
        }
        if !(self.p - 1).is_multiple_of(m) {
            return Err(ModformsError::Unsupported(format!(
                "Q(ζ_{n}) does not embed in Q_{}(ζ_{}^{r}) since {m} ∤ {}",
                self.p,
                self.p,
                self.p - 1
            )));
        }
        Ok((r, m))
    }

    /// The image of ζ_M, for `M | p − 1`.
    fn tame_root(&self, m: u64, prec: i64) -> PadicNum {
        let g = primitive_root(self.p);
        let w = PadicNum::from_int(self.p, g, prec).teichmuller().expect("g is a unit");
        w.pow(self.t * ((self.p - 1) / m))
    }

    fn embed_coeffs(&self, n: u64, coeffs: &[PadicNum], prec: i64) -> Result<PadicCyclo, ModformsError> {
        let (r, m) = self.split_conductor(n)?;
        let q = self.p.pow(r);
        // ζ_n = ζ_{p^r}^u · ζ_M^w with u·M + w·p^r ≡ 1 mod n.
        let u = if q == 1 { 0 } else { mod_inv(m as i64, q as i64).unwrap() as u64 };
        let w = if m == 1 { 0 } else { mod_inv(q as i64, m as i64).unwrap() as u64 };
        let tame = self.tame_root(m, prec);
        let powers: Vec<PadicNum> = (0..m).map(|j| tame.pow(j)).collect();
        let mut poly = vec![PadicNum::zero(self.p, prec); q as usize];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = j as u64;
            let slot = (j * u % q) as usize;
            poly[slot] = poly[slot].add_ref(&c.mul_ref(&powers[(j * w % m) as usize]));
        }
        Ok(PadicCyclo::from_poly(self.p, r, poly, prec))
    }

    pub fn embed_int(&self, x: &CycloInt, prec: i64) -> Result<PadicCyclo, ModformsError> {
        let cs: Vec<PadicNum> = x.coeffs().iter().map(|&c| PadicNum::from_int(self.p, c, prec)).collect();
        self.embed_coeffs(x.conductor(), &cs, prec)
    }

    pub fn embed_num(&self, x: &CycloNum, prec: i64) -> Result<PadicCyclo, ModformsError> {
        let cs: Vec<PadicNum> =
            x.coeffs().iter().map(|c: &BigRational| PadicNum::from_rational(self.p, c, prec)).collect();
        self.embed_coeffs(x.conductor(), &cs, prec)
    }

    /// The image of an element whose conductor is prime to p.
    pub fn embed_tame(&self, x: &CycloInt, prec: i64) -> Result<PadicNum, ModformsError> {
        let v = self.embed_int(x, prec)?;
        if v.level() != 0 {
            return Err(ModformsError::Unsupported(format!("conductor {} is divisible by {}", x.conductor(), self.p)));
        }
        Ok(v.coords()[0].clone())
    }

    /// The root of unity ζ with image the Teichmüller lift of `u`.
    pub fn teichmuller_root(&self, u: &PadicNum) -> Result<RootOfUnity, ModformsError> {
        if !u.is_unit() {
            return Err(ModformsError::DomainError("Teichmüller character of a non-unit".into()));
        }
        let p = self.p;
        let base = mod_pow(primitive_root(p), self.t, p);
        let rho = u.residue();
        let j = (0..p - 1).find(|&j| mod_pow(base, j, p) == rho).expect("g^t generates F_p^×");
        Ok(RootOfUnity::new(p - 1, j as i64).reduced())
    }

    /// `ord_p` of the image of `x` (normalized so that `ord_p(p) = 1`).
    pub fn valuation(&self, x: &CycloInt, prec: i64) -> Result<num_rational::Ratio<i64>, ModformsError> {
        Ok(self.embed_int(x, prec)?.ord_exact()?)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} t={}", self.p, self.t)
    }
}

/// Whether Q(ζ_n) embeds in some Q_p(ζ_{p^r}).
pub fn embeds_at(p: u64, n: u64) -> bool {
    let tame: u64 = factor(n).iter().filter(|&&(l, _)| l != p).map(|&(l, e)| l.pow(e)).product();
    (p - 1).is_multiple_of(tame)
}
