use std::fmt;

use num_rational::BigRational;

use super::elem::{parse_list, parse_rational, CycloInt, CycloNum};
use super::CycloError;
use crate::arith::{factor, kronecker, lcm};

/// `a + b·√−d` with `a, b ∈ Q(ζ_m)` and `d > 0` squarefree.
///
/// This is a field whenever `√−d ∉ Q(ζ_m)`; otherwise the pair
/// representation is redundant and [`QuadCycloNum::is_field`] is false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadCycloNum {
    m: u64,
    d: u64,
    a: CycloNum,
    b: CycloNum,
}

/// Discriminant of Q(√−d): `−D` with `D = d` for `d ≡ 3 mod 4`, else `4d`.
pub fn disc_of(d: u64) -> u64 {
    if d % 4 == 3 {
        d
    } else {
        4 * d
    }
}

pub fn is_squarefree(d: u64) -> bool {
    d >= 1 && factor(d).iter().all(|&(_, e)| e == 1)
}

impl QuadCycloNum {
    pub fn new(m: u64, d: u64, a: CycloNum, b: CycloNum) -> Result<Self, CycloError> {
        if !is_squarefree(d) {
            return Err(CycloError::NotSquarefree(d));
        }
        Ok(QuadCycloNum { m, d, a: a.embed(m)?, b: b.embed(m)? })
    }

    pub fn from_cyclo(m: u64, d: u64, a: &CycloNum) -> Result<Self, CycloError> {
        Self::new(m, d, a.clone(), CycloNum::zero(m))
    }

    pub fn from_int(m: u64, d: u64, v: i64) -> Self {
        Self::from_cyclo(m, d, &CycloNum::from_int(m, v)).expect("valid field data")
    }

    pub fn zero(m: u64, d: u64) -> Self {
        Self::from_int(m, d, 0)
    }

    pub fn one(m: u64, d: u64) -> Self {
        Self::from_int(m, d, 1)
    }

    /// `√−d`.
    pub fn sqrt_minus_d(m: u64, d: u64) -> Self {
        Self::new(m, d, CycloNum::zero(m), CycloNum::one(m)).expect("valid field data")
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn a(&self) -> &CycloNum {
        &self.a
    }

    pub fn b(&self) -> &CycloNum {
        &self.b
    }

    /// True when `√−d ∉ Q(ζ_m)`, i.e. `D ∤ m`.
    pub fn is_field(&self) -> bool {
        !self.m.is_multiple_of(disc_of(self.d))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.d, o.d, "different quadratic parts");
    }

    /// Move to conductor `m'` with `m | m'`.
    pub fn embed(&self, m: u64) -> Result<Self, CycloError> {
        Self::new(m, self.d, self.a.clone(), self.b.clone())
    }

    fn align(x: &Self, y: &Self) -> (Self, Self) {
        if x.m == y.m {
            return (x.clone(), y.clone());
        }
        let m = lcm(x.m, y.m);
        (x.embed(m).unwrap(), y.embed(m).unwrap())
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        self.check(o);
        let (x, y) = Self::align(self, o);
        QuadCycloNum { m: x.m, d: x.d, a: x.a.add_ref(&y.a), b: x.b.add_ref(&y.b) }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        QuadCycloNum { m: self.m, d: self.d, a: self.a.neg_ref(), b: self.b.neg_ref() }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        self.check(o);
        let (x, y) = Self::align(self, o);
        let dd = BigRational::from_integer((x.d as i64).into());
        let a = x.a.mul_ref(&y.a).sub_ref(&x.b.mul_ref(&y.b).scale(&dd));
        let b = x.a.mul_ref(&y.b).add_ref(&x.b.mul_ref(&y.a));
        QuadCycloNum { m: x.m, d: x.d, a, b }
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        let c = c.embed(lcm(c.conductor(), self.m)).unwrap();
        let me = self.embed(c.conductor()).unwrap();
        QuadCycloNum { m: me.m, d: me.d, a: me.a.mul_ref(&c), b: me.b.mul_ref(&c) }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.m, self.d);
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

    /// `√−d ↦ −√−d`, fixing Q(ζ_m).
    pub fn conj_sqrt(&self) -> Self {
        QuadCycloNum { m: self.m, d: self.d, a: self.a.clone(), b: self.b.neg_ref() }
    }

    /// Complex conjugation: `ζ ↦ ζ^{-1}` and `√−d ↦ −√−d`.
    pub fn complex_conj(&self) -> Self {
        QuadCycloNum { m: self.m, d: self.d, a: self.a.conj(), b: self.b.conj().neg_ref() }
    }

    /// The automorphism `ζ_m ↦ ζ_m^s`, `√−d ↦ sign·√−d`.
    pub fn galois(&self, s: i64, sign: i64) -> Self {
        let b = self.b.galois(s);
        QuadCycloNum { m: self.m, d: self.d, a: self.a.galois(s), b: if sign < 0 { b.neg_ref() } else { b } }
    }

    /// Relative norm `a² + d·b²` to Q(ζ_m).
    pub fn rel_norm(&self) -> CycloNum {
        let dd = BigRational::from_integer((self.d as i64).into());
        self.a.mul_ref(&self.a).add_ref(&self.b.mul_ref(&self.b).scale(&dd))
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rel_norm().inverse()?;
        Some(self.conj_sqrt().scale(&n))
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        Some(self.mul_ref(&o.inverse()?))
    }

    /// The element of Q(ζ_{lcm(m, D)}) obtained by writing `√−d` as a Gauss sum.
    pub fn to_cyclo(&self) -> CycloNum {
        let big_d = disc_of(self.d);
        let n = lcm(self.m, big_d);
        let root = sqrt_minus_d_cyclo(self.d).embed(n).unwrap();
        self.a.embed(n).unwrap().add_ref(&self.b.embed(n).unwrap().mul_ref(&root))
    }

    /// Equality of the underlying complex numbers, even when `√−d ∈ Q(ζ_m)`.
    pub fn value_eq(&self, o: &Self) -> bool {
        self.to_cyclo().value_eq(&o.to_cyclo())
    }

    /// Recognize an element of a cyclotomic field as `a + b√−d` with
    /// `a, b ∈ Q(ζ_m)`. Requires `√−d ∉ Q(ζ_m)`.
    pub fn from_cyclo_field(x: &CycloNum, m: u64, d: u64) -> Result<Self, CycloError> {
        let big_d = disc_of(d);
        if m.is_multiple_of(big_d) {
            return Err(CycloError::NotAField { m, d });
        }
        let n = lcm(lcm(m, big_d), x.conductor());
        let x = x.embed(n)?;
        let c = (1..n)
            .find(|&c| crate::arith::gcd(c, n) == 1 && c % m == 1 % m && kronecker(-(big_d as i64), c) == -1)
            .ok_or(CycloError::NotAField { m, d })?;
        let tx = x.galois(c as i64);
        let half = BigRational::new(1.into(), 2.into());
        let a = x.add_ref(&tx).scale(&half);
        let root = sqrt_minus_d_cyclo(d).embed(n)?;
        let scale = BigRational::new(1.into(), (-2 * d as i64).into());
        let b = x.sub_ref(&tx).mul_ref(&root).scale(&scale);
        let a = a.restrict(m).ok_or(CycloError::NotInSubfield(m))?;
        let b = b.restrict(m).ok_or(CycloError::NotInSubfield(m))?;
        Self::new(m, d, a, b)
    }

    pub fn to_text(&self) -> String {
        let part = |c: &CycloNum| c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("{}; {}; {}; {}", self.m, self.d, part(&self.a), part(&self.b))
    }

    pub fn parse(s: &str) -> Result<Self, CycloError> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 4 {
            return Err(CycloError::Parse(format!("expected `m; d; a-part; b-part`, got {s:?}")));
        }
        let m: u64 = parts[0].trim().parse().map_err(|_| CycloError::Parse(format!("bad m in {s:?}")))?;
        let d: u64 = parts[1].trim().parse().map_err(|_| CycloError::Parse(format!("bad d in {s:?}")))?;
        if m == 0 {
            return Err(CycloError::Parse("conductor must be positive".into()));
        }
        let a = CycloNum::from_poly(m, parse_list(parts[2], parse_rational, s)?);
        let b = CycloNum::from_poly(m, parse_list(parts[3], parse_rational, s)?);
        Self::new(m, d, a, b)
    }
}

/// `√−d` as a Gauss sum in Q(ζ_D).
pub fn sqrt_minus_d_cyclo(d: u64) -> CycloNum {
    let big_d = disc_of(d);
    let g = CycloInt::from_terms(big_d, (1..big_d as i64).map(|a| (a, kronecker(-(big_d as i64), a as u64)))).to_num();
    if big_d == d {
        g
    } else {
        g.scale(&BigRational::new(1.into(), 2.into()))
    }
}

impl fmt::Display for QuadCycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Exact field operations shared by the cyclotomic and quadratic-cyclotomic types.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl Field for CycloNum {
    fn zero_like(&self) -> Self {
        CycloNum::zero(self.conductor())
    }
    fn one_like(&self) -> Self {
        CycloNum::one(self.conductor())
    }
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

impl Field for QuadCycloNum {
    fn zero_like(&self) -> Self {
        QuadCycloNum::zero(self.m, self.d)
    }
    fn one_like(&self) -> Self {
        QuadCycloNum::one(self.m, self.d)
    }
    fn is_zero(&self) -> bool {
        QuadCycloNum::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_ref(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_ref(o)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_sum_squares_to_minus_d() {
        for d in [1u64, 2, 3, 7, 5, 11] {
            let s = sqrt_minus_d_cyclo(d);
            let sq = s.mul_ref(&s);
            assert_eq!(sq.as_rational(), Some(BigRational::from_integer((-(d as i64)).into())), "d={d}");
        }
    }

    #[test]
    fn weil_number_norm() {
        // π = 3 + 2i in Q(ζ_5, i): π·π̄ = 13
        let pi = QuadCycloNum::new(5, 1, CycloNum::from_int(5, 3), CycloNum::from_int(5, 2)).unwrap();
        let n = pi.mul_ref(&pi.complex_conj());
        assert_eq!(n, QuadCycloNum::from_int(5, 1, 13));
        let inv = pi.inverse().unwrap();
        assert_eq!(pi.mul_ref(&inv), QuadCycloNum::one(5, 1));
    }

    #[test]
    fn round_trip_through_cyclotomic_field() {
        let z = CycloNum::root(25, 3);
        let x =
            QuadCycloNum::new(25, 1, z.clone(), CycloNum::from_terms(25, [(2, BigRational::from_integer(5.into()))]))
                .unwrap();
        let c = x.to_cyclo();
        assert_eq!(c.conductor(), 100);
        let back = QuadCycloNum::from_cyclo_field(&c, 25, 1).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn text_format() {
        let x = QuadCycloNum::new(3, 1, CycloNum::from_ratio(3, 1, 2), CycloNum::root(3, 1)).unwrap();
        let s = x.to_text();
        assert_eq!(s, "3; 1; 1/2,0; 0,1");
        assert_eq!(QuadCycloNum::parse(&s).unwrap(), x);
        assert!(QuadCycloNum::parse("3; 4; 1; 0").is_err());
    }
}
