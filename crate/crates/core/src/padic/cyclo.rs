use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;

use super::{PadicError, PadicNum, Valuation};
use crate::arith::ipow;

/// An element of Z_p[ζ_{p^r}] (or Q_p(ζ_{p^r})) in the power basis
/// `1, ζ, …, ζ^{φ(p^r)-1}`, always reduced modulo Φ_{p^r}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicCyclo {
    p: u64,
    level: u32,
    coords: Vec<PadicNum>,
}

fn phi_pr(p: u64, r: u32) -> usize {
    if r == 0 {
        1
    } else {
        (ipow(p as i64, r - 1) as u64 * (p - 1)) as usize
    }
}

impl PadicCyclo {
    /// Reduce a coefficient list (constant term first) modulo Φ_{p^r}.
    pub fn from_poly(p: u64, level: u32, mut poly: Vec<PadicNum>, abs: i64) -> Self {
        let phi = phi_pr(p, level);
        if level == 0 {
            let sum = poly.iter().fold(PadicNum::zero(p, abs), |acc, c| acc.add_ref(c));
            return PadicCyclo { p, level, coords: vec![sum.truncate(abs)] };
        }
        let step = phi / (p as usize - 1);
        for j in (phi..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[j], PadicNum::zero(p, abs));
            if c.is_zero() && c.abs_prec() >= abs {
                continue;
            }
            for i in 0..(p as usize - 1) {
                let k = j - phi + i * step;
                poly[k] = poly[k].sub_ref(&c);
            }
        }
        poly.resize(phi, PadicNum::zero(p, abs));
        let coords = poly.iter().map(|c| c.truncate(abs)).collect();
        PadicCyclo { p, level, coords }
    }

    pub fn from_coords(p: u64, level: u32, coords: Vec<PadicNum>) -> Self {
        assert_eq!(coords.len(), phi_pr(p, level), "coordinate count must equal φ(p^r)");
        PadicCyclo { p, level, coords }
    }

    pub fn from_padic(x: &PadicNum, level: u32) -> Self {
        let p = x.p();
        let mut coords = vec![PadicNum::zero(p, x.abs_prec()); phi_pr(p, level)];
        coords[0] = x.clone();
        PadicCyclo { p, level, coords }
    }

    pub fn zero(p: u64, level: u32, abs: i64) -> Self {
        Self::from_padic(&PadicNum::zero(p, abs), level)
    }

    pub fn one(p: u64, level: u32, abs: i64) -> Self {
        Self::from_padic(&PadicNum::one(p, abs), level)
    }

    /// `ζ_{p^r}^a` for any integer a.
    pub fn zeta(p: u64, level: u32, a: i64, abs: i64) -> Self {
        let n = ipow(p as i64, level);
        let e = a.rem_euclid(n) as usize;
        let mut poly = vec![PadicNum::zero(p, abs); e + 1];
        poly[e] = PadicNum::one(p, abs);
        Self::from_poly(p, level, poly, abs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coords(&self) -> &[PadicNum] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    /// Smallest absolute precision among the coordinates.
    pub fn abs_prec(&self) -> i64 {
        self.coords.iter().map(PadicNum::abs_prec).min().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(PadicNum::is_zero)
    }

    pub fn truncate(&self, abs: i64) -> Self {
        self.map(|c| c.truncate(abs))
    }

    fn map(&self, f: impl Fn(&PadicNum) -> PadicNum) -> Self {
        PadicCyclo { p: self.p, level: self.level, coords: self.coords.iter().map(f).collect() }
    }

    fn same_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "different primes");
        assert_eq!(self.level, other.level, "different cyclotomic levels; embed first");
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.same_ring(other);
        PadicCyclo {
            p: self.p,
            level: self.level,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.same_ring(other);
        PadicCyclo {
            p: self.p,
            level: self.level,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn neg_ref(&self) -> Self {
        self.map(PadicNum::neg_ref)
    }

    pub fn scale(&self, s: &PadicNum) -> Self {
        self.map(|c| c.mul_ref(s))
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.same_ring(other);
        let n = self.coords.len();
        let abs = self.abs_prec().min(other.abs_prec());
        let mut prod = vec![PadicNum::zero(self.p, abs + 64); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() && a.abs_prec() >= abs + 64 {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                prod[i + j] = prod[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::from_poly(self.p, self.level, prod, abs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p, self.level, self.abs_prec());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Image under ζ_{p^r} = ζ_{p^{r'}}^{p^{r'-r}}.
    pub fn embed(&self, to: u32) -> Result<Self, PadicError> {
        if to < self.level {
            return Err(PadicError::LevelDecrease { from: self.level, to });
        }
        if to == self.level {
            return Ok(self.clone());
        }
        let abs = self.abs_prec();
        let stride = if self.level == 0 { 0 } else { ipow(self.p as i64, to - self.level) as usize };
        let mut poly = vec![PadicNum::zero(self.p, abs); phi_pr(self.p, to)];
        for (j, c) in self.coords.iter().enumerate() {
            poly[j * stride] = poly[j * stride].add_ref(c);
        }
        Ok(Self::from_poly(self.p, to, poly, abs))
    }

    /// Coefficients in the basis `1, π, π², …` with `π = ζ − 1` (Taylor shift by 1).
    pub fn pi_expansion(&self) -> Vec<PadicNum> {
        let mut c = self.coords.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = c[j].add_ref(&c[j + 1]);
            }
        }
        c
    }

    /// Valuation normalized by `ord(p) = 1`.
    ///
    /// Each π-adic coefficient contributes `ord(b_i) + i/φ`; these rationals
    /// have distinct fractional parts, so the minimum is attained once. A
    /// coefficient lost to precision contributes a lower bound instead, and if
    /// that bound is not beaten the element counts as zero at that precision.
    pub fn ord(&self) -> Valuation {
        let phi = self.coords.len() as i64;
        let mut finite: Option<Ratio<i64>> = None;
        let mut floor: Option<Ratio<i64>> = None;
        for (i, b) in self.pi_expansion().iter().enumerate() {
            let off = Ratio::new(i as i64, phi);
            let v = Ratio::from_integer(b.shift()) + off;
            let slot = if b.is_zero() { &mut floor } else { &mut finite };
            *slot = Some(slot.map_or(v, |w| w.min(v)));
        }
        match (finite, floor) {
            (Some(f), Some(z)) if f < z => Valuation::Finite(f),
            (Some(f), None) => Valuation::Finite(f),
            (_, Some(z)) => Valuation::Infinite { at_precision: z },
            (None, None) => Valuation::infinite(0),
        }
    }

    pub fn ord_exact(&self) -> Result<Ratio<i64>, PadicError> {
        match self.ord() {
            Valuation::Finite(v) => Ok(v),
            Valuation::Infinite { at_precision } => Err(PadicError::PrecisionExhausted(at_precision.to_integer())),
        }
    }

    /// Norm to Q_p, as the resultant of Φ_{p^r} with the coordinate polynomial.
    pub fn norm(&self) -> PadicNum {
        let abs = self.abs_prec();
        let phi = cyclotomic_pr(self.p, self.level, abs);
        resultant(&phi, &self.coords, self.p, abs)
    }

    /// Apply σ_a : ζ ↦ ζ^a (a prime to p).
    pub fn galois(&self, a: i64) -> Self {
        let n = ipow(self.p as i64, self.level);
        let abs = self.abs_prec();
        let mut poly = vec![PadicNum::zero(self.p, abs); n.max(1) as usize];
        for (j, c) in self.coords.iter().enumerate() {
            let k = (j as i64 * a).rem_euclid(n.max(1)) as usize;
            poly[k] = poly[k].add_ref(c);
        }
        Self::from_poly(self.p, self.level, poly, abs)
    }

    /// Evaluate an integer polynomial in ζ (constant term first).
    pub fn from_int_poly(p: u64, level: u32, coeffs: &[BigInt], abs: i64) -> Self {
        let poly = coeffs.iter().map(|c| PadicNum::from_int(p, c.clone(), abs)).collect();
        Self::from_poly(p, level, poly, abs)
    }
}

fn cyclotomic_pr(p: u64, level: u32, abs: i64) -> Vec<PadicNum> {
    if level == 0 {
        return vec![PadicNum::from_int(p, -1, abs), PadicNum::one(p, abs)];
    }
    let step = ipow(p as i64, level - 1) as usize;
    let mut out = vec![PadicNum::zero(p, abs); step * (p as usize - 1) + 1];
    for i in 0..p as usize {
        out[i * step] = PadicNum::one(p, abs);
    }
    out
}

fn trim(mut f: Vec<PadicNum>) -> Vec<PadicNum> {
    while f.last().is_some_and(PadicNum::is_zero) {
        f.pop();
    }
    f
}

fn poly_rem(g: &[PadicNum], f: &[PadicNum]) -> Vec<PadicNum> {
    let mut r = g.to_vec();
    let df = f.len() - 1;
    let lc = &f[df];
    while r.len() > df {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let q = top.checked_div(lc).expect("nonzero leading coefficient");
        let off = r.len() - df;
        for (i, c) in f[..df].iter().enumerate() {
            r[off + i] = r[off + i].sub_ref(&q.mul_ref(c));
        }
    }
    trim(r)
}

/// `res(f, g) = lc(f)^{deg g} Π_{f(α)=0} g(α)` by the Euclidean algorithm.
fn resultant(f: &[PadicNum], g: &[PadicNum], p: u64, abs: i64) -> PadicNum {
    let f = trim(f.to_vec());
    let g = trim(g.to_vec());
    if f.is_empty() || g.is_empty() {
        return PadicNum::zero(p, abs);
    }
    let (df, dg) = (f.len() - 1, g.len() - 1);
    if df == 0 {
        return f[0].pow(dg as u64);
    }
    if dg == 0 {
        return g[0].pow(df as u64);
    }
    if df > dg {
        let sign = if (df * dg) % 2 == 1 { -1 } else { 1 };
        let r = resultant(&g, &f, p, abs);
        return if sign < 0 { r.neg_ref() } else { r };
    }
    let r = poly_rem(&g, &f);
    if r.is_empty() {
        return PadicNum::zero(p, abs);
    }
    let dr = r.len() - 1;
    f[df].pow((dg - dr) as u64).mul_ref(&resultant(&f, &r, p, abs))
}

impl fmt::Display for PadicCyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[level {}]", self.level)?;
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                write!(f, " {}·ζ^{}", c, i)?;
            }
        }
        Ok(())
    }
}
