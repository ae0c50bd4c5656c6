use std::fmt;

use super::elem::CycloInt;
use super::CycloError;
use crate::padic::{PadicCyclo, PadicError};

/// An element of F_p[y]/(y^{p^m} − 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    p: u64,
    m: u32,
    coeffs: Vec<u64>,
}

impl TruncPoly {
    pub fn zero(p: u64, m: u32) -> Self {
        TruncPoly { p, m, coeffs: vec![0; p.pow(m) as usize] }
    }

    pub fn one(p: u64, m: u32) -> Self {
        Self::monomial(p, m, 0, 1)
    }

    /// `c·y^j`.
    pub fn monomial(p: u64, m: u32, j: u64, c: i64) -> Self {
        let mut x = Self::zero(p, m);
        let len = x.coeffs.len() as u64;
        x.coeffs[(j % len) as usize] = c.rem_euclid(p as i64) as u64;
        x
    }

    /// Reduce integer coefficients of `Σ c_j y^j`, wrapping exponents.
    pub fn from_ints(p: u64, m: u32, coeffs: &[i64]) -> Self {
        let mut x = Self::zero(p, m);
        let len = x.coeffs.len();
        for (j, c) in coeffs.iter().enumerate() {
            let slot = &mut x.coeffs[j % len];
            *slot = (*slot + c.rem_euclid(p as i64) as u64) % p;
        }
        x
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, o: &Self) {
        assert!(self.p == o.p && self.m == o.m, "mismatched quotient rings");
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.check(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| (a + b) % self.p).collect();
        TruncPoly { coeffs, ..*self }
    }

    pub fn neg_ref(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| (self.p - a) % self.p).collect();
        TruncPoly { coeffs, ..*self }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    /// Cyclic convolution modulo p.
    pub fn mul_ref(&self, o: &Self) -> Self {
        self.check(o);
        let len = self.coeffs.len();
        let mut out = vec![0u64; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                let k = (i + j) % len;
                out[k] = (out[k] + a * b) % self.p;
            }
        }
        TruncPoly { coeffs: out, ..*self }
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| match (j, c) {
                (0, c) => c.to_string(),
                (1, 1) => "y".into(),
                (1, c) => format!("{c}y"),
                (j, 1) => format!("y^{j}"),
                (j, c) => format!("{c}y^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// The level `r` with `n = p^r`, if any.
pub(crate) fn p_level(n: u64, p: u64) -> Option<u32> {
    let mut r = 0;
    let mut q = 1u64;
    while q < n {
        q = q.checked_mul(p)?;
        r += 1;
    }
    (q == n).then_some(r)
}

/// The image of `x ∈ Z[ζ_{p^n}]` under `ζ_{p^n} ↦ y` in F_p[y]/(y^{p^m} − 1).
///
/// The map is well defined because `Φ_{p^n}(y) = Σ_{i<p} y^{i·p^{n−1}}`
/// collapses to `p = 0` once `y^{p^m} = 1` with `m < n`.
pub fn quotient_reduce(x: &CycloInt, p: u64, n: u32, m: u32) -> Result<TruncPoly, CycloError> {
    if m >= n {
        return Err(CycloError::LevelError { m, n });
    }
    let x = x.embed(p.pow(n))?;
    Ok(TruncPoly::from_ints(p, m, x.coeffs()))
}

/// [`quotient_reduce`] for an element of Z_p[ζ_{p^r}].
pub fn quotient_reduce_padic(x: &PadicCyclo, m: u32) -> Result<TruncPoly, CycloError> {
    let n = x.level();
    if m >= n {
        return Err(CycloError::LevelError { m, n });
    }
    let p = x.p();
    let mut out = TruncPoly::zero(p, m);
    let len = out.coeffs.len();
    for (j, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !c.is_integral() || c.abs_prec() < 1 {
            return Err(CycloError::DomainError(PadicError::NotIntegral.to_string()));
        }
        let slot = &mut out.coeffs[j % len];
        *slot = (*slot + c.residue()) % p;
    }
    Ok(out)
}
