use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PadicError, Valuation};

pub(crate) fn big_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// p-adic valuation of a nonzero integer.
pub(crate) fn ord_int(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of n! (Legendre).
pub fn ord_factorial(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q as u32;
        q /= p;
    }
    v
}

/// A truncated element of Q_p, stored as `p^shift * unit + O(p^(shift + prec))`.
///
/// `unit` lies in `[0, p^prec)` and is prime to p unless the value is zero
/// at its precision, in which case `unit = 0`, `prec = 0` and `shift` is the
/// absolute precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNum {
    p: u64,
    unit: BigInt,
    prec: u32,
    shift: i64,
}

impl PadicNum {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNum { p, unit: BigInt::zero(), prec: 0, shift: abs_prec }
    }

    pub fn one(p: u64, abs_prec: i64) -> Self {
        Self::from_int(p, 1, abs_prec)
    }

    /// Integer `n` known modulo `p^abs_prec`.
    pub fn from_int(p: u64, n: impl Into<BigInt>, abs_prec: i64) -> Self {
        Self::from_scaled(p, n.into(), 0, abs_prec)
    }

    /// `p^shift * n` known modulo `p^abs_prec`.
    fn from_scaled(p: u64, n: BigInt, shift: i64, abs_prec: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p, abs_prec);
        }
        let v = ord_int(&n, p) as i64;
        let s = shift + v;
        if s >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let prec = (abs_prec - s) as u32;
        let unit = (n / big_pow(p, v as u32)).mod_floor(&big_pow(p, prec));
        PadicNum { p, unit, prec, shift: s }
    }

    pub fn from_rational(p: u64, r: &BigRational, abs_prec: i64) -> Self {
        if r.is_zero() {
            return Self::zero(p, abs_prec);
        }
        let vn = ord_int(r.numer(), p) as i64;
        let vd = ord_int(r.denom(), p) as i64;
        let s = vn - vd;
        if s >= abs_prec {
            return Self::zero(p, abs_prec);
        }
        let prec = (abs_prec - s) as u32;
        let m = big_pow(p, prec);
        let num = r.numer() / big_pow(p, vn as u32);
        let den = r.denom() / big_pow(p, vd as u32);
        let inv = mod_inverse(&den, &m).expect("unit denominator");
        let unit = (num * inv).mod_floor(&m);
        PadicNum { p, unit, prec, shift: s }
    }

    pub fn from_ratio(p: u64, num: i64, den: i64, abs_prec: i64) -> Self {
        Self::from_rational(p, &BigRational::new(num.into(), den.into()), abs_prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    /// Absolute precision: the value is known modulo `p^abs_prec()`.
    pub fn abs_prec(&self) -> i64 {
        self.shift + self.prec as i64
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn ord(&self) -> Valuation {
        if self.is_zero() {
            Valuation::infinite(self.shift)
        } else {
            Valuation::int(self.shift)
        }
    }

    /// Integer valuation, failing if the value vanishes at its precision.
    pub fn ord_exact(&self) -> Result<i64, PadicError> {
        if self.is_zero() {
            Err(PadicError::PrecisionExhausted(self.shift))
        } else {
            Ok(self.shift)
        }
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.shift == 0
    }

    pub fn is_integral(&self) -> bool {
        self.shift >= 0
    }

    /// Representative in `[0, p^abs_prec)` for integral values.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.shift < 0 && !self.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        Some(&self.unit * big_pow(self.p, self.shift as u32))
    }

    /// Representative of an integral value reduced mod p.
    pub fn residue(&self) -> u64 {
        match self.to_bigint() {
            Some(n) if self.abs_prec() > 0 => n.mod_floor(&BigInt::from(self.p)).to_u64().unwrap(),
            _ => 0,
        }
    }

    /// Drop digits beyond absolute precision `abs`.
    pub fn truncate(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.shift {
            return Self::zero(self.p, abs.min(self.abs_prec()));
        }
        let prec = (abs - self.shift) as u32;
        PadicNum { p: self.p, unit: self.unit.mod_floor(&big_pow(self.p, prec)), prec, shift: self.shift }
    }

    /// Reinterpret the stored digits as exact and extend to precision `abs`.
    pub fn lift(&self, abs: i64) -> Self {
        if abs <= self.abs_prec() {
            return self.truncate(abs);
        }
        if self.is_zero() {
            return Self::zero(self.p, abs);
        }
        PadicNum { p: self.p, unit: self.unit.clone(), prec: (abs - self.shift) as u32, shift: self.shift }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        let abs = self.abs_prec().min(other.abs_prec());
        let s = self.shift.min(other.shift);
        if abs <= s {
            return Self::zero(self.p, abs);
        }
        let m = big_pow(self.p, (abs - s) as u32);
        let a = &self.unit * big_pow(self.p, (self.shift - s) as u32);
        let b = &other.unit * big_pow(self.p, (other.shift - s) as u32);
        Self::from_scaled(self.p, (a + b).mod_floor(&m), s, abs)
    }

    pub fn neg_ref(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = big_pow(self.p, self.prec);
        PadicNum { p: self.p, unit: (&m - &self.unit).mod_floor(&m), prec: self.prec, shift: self.shift }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p, self.shift + other.shift);
        }
        let prec = self.prec.min(other.prec);
        let m = big_pow(self.p, prec);
        PadicNum { p: self.p, unit: (&self.unit * &other.unit).mod_floor(&m), prec, shift: self.shift + other.shift }
    }

    /// Multiply by an exact integer.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(self.p, self.abs_prec().max(self.shift));
        }
        let exact = Self::from_int(self.p, n.clone(), self.abs_prec() + ord_int(n, self.p) as i64 + 1);
        self.mul_ref(&exact)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other);
        if other.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.shift - other.shift));
        }
        let prec = self.prec.min(other.prec);
        let m = big_pow(self.p, prec);
        let inv = mod_inverse(&other.unit, &m).expect("unit part is invertible");
        Ok(PadicNum { p: self.p, unit: (&self.unit * inv).mod_floor(&m), prec, shift: self.shift - other.shift })
    }

    pub fn inverse(&self) -> Result<Self, PadicError> {
        Self::one(self.p, self.prec as i64).checked_div(self)
    }

    /// Divide by an exact integer; loses `ord_p(n)` digits of absolute precision.
    pub fn div_int(&self, n: i64) -> Result<Self, PadicError> {
        let big = BigInt::from(n);
        if big.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let exact = Self::from_int(self.p, big.clone(), self.abs_prec() + ord_int(&big, self.p) as i64 + 1);
        self.checked_div(&exact)
    }

    /// Multiply by `p^k` (exact shift, no precision loss in relative terms).
    pub fn shift_by(&self, k: i64) -> Self {
        PadicNum { p: self.p, unit: self.unit.clone(), prec: self.prec, shift: self.shift + k }
    }

    pub fn pow(&self, e: u64) -> Self {
        if e == 0 {
            return Self::one(self.p, self.prec.max(1) as i64);
        }
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_ref(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc.expect("positive exponent")
    }

    /// Integer power with an arbitrary-size exponent.
    pub fn pow_big(&self, e: &BigInt) -> Self {
        assert!(!e.is_negative());
        if self.is_zero() {
            return self.pow(e.to_u64().unwrap_or(u64::MAX));
        }
        let m = big_pow(self.p, self.prec);
        let shift = if self.shift == 0 { 0 } else { e.to_i64().expect("exponent fits") * self.shift };
        PadicNum { p: self.p, unit: self.unit.modpow(e, &m), prec: self.prec, shift }
    }

    /// Congruence at the smaller of the two absolute precisions.
    pub fn congruent(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Teichmüller representative: the (p-1)-st root of unity congruent to
    /// `self` mod p, at the precision of `self`.
    pub fn teichmuller(&self) -> Result<Self, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotAUnit);
        }
        let n = self.prec;
        let m = big_pow(self.p, n);
        let e = big_pow(self.p, n.saturating_sub(1));
        Ok(PadicNum { p: self.p, unit: self.unit.modpow(&e, &m), prec: n, shift: 0 })
    }

    /// `self / teichmuller(self)`, the principal one-unit part.
    pub fn one_unit_part(&self) -> Result<Self, PadicError> {
        let w = self.teichmuller()?;
        self.checked_div(&w)
    }

    /// p-adic logarithm of a one-unit, by the Mercator series. The result
    /// keeps the absolute precision of the input; each division by `n`
    /// loses `ord_p(n)` digits, which is absorbed by the growth of `(u-1)^n`.
    pub fn log_one_unit(&self) -> Result<Self, PadicError> {
        if self.shift != 0 || self.is_zero() || self.residue() != 1 {
            return Err(PadicError::NotOneUnit);
        }
        let target = self.abs_prec();
        let x = self.sub_ref(&Self::one(self.p, target));
        if x.is_zero() {
            return Ok(Self::zero(self.p, target));
        }
        let v = x.shift;
        let mut sum = Self::zero(self.p, target);
        let mut power = x.clone();
        let mut n: i64 = 1;
        loop {
            let logn = (n as f64).ln() / (self.p as f64).ln();
            if n * v - logn.floor() as i64 >= target {
                break;
            }
            let term = power.div_int(n)?;
            sum = if n % 2 == 1 { sum.add_ref(&term) } else { sum.sub_ref(&term) };
            power = power.mul_ref(&x);
            n += 1;
        }
        Ok(sum.truncate(target))
    }

    /// p-adic exponential, defined for `ord(x) >= 1` (p odd).
    pub fn exp(&self) -> Result<Self, PadicError> {
        let target = self.abs_prec();
        if self.is_zero() {
            return Ok(Self::one(self.p, target));
        }
        if self.shift < 1 {
            return Err(PadicError::NotInConvergenceDisc);
        }
        let v = self.shift as f64;
        let slope = v - 1.0 / (self.p as f64 - 1.0);
        let mut sum = Self::one(self.p, target);
        let mut term = Self::one(self.p, target + 64);
        let mut n: i64 = 1;
        loop {
            if (n as f64) * slope > target as f64 + 1.0 {
                break;
            }
            term = term.mul_ref(self).div_int(n)?;
            sum = sum.add_ref(&term);
            n += 1;
        }
        Ok(sum.truncate(target))
    }

    /// Square roots of a unit that is a square mod p, sorted by residue.
    pub fn sqrt(&self) -> Option<[Self; 2]> {
        if !self.is_unit() {
            return None;
        }
        let p = self.p;
        let a0 = self.residue();
        let r0 = (1..p).find(|r| r * r % p == a0)?;
        let poly = [self.neg_ref(), Self::zero(p, self.abs_prec()), Self::one(p, self.abs_prec())];
        let x = hensel_root(&poly, r0, self.abs_prec()).ok()?;
        let y = x.neg_ref();
        if x.residue() <= y.residue() {
            Some([x, y])
        } else {
            Some([y, x])
        }
    }
}

/// Evaluate a polynomial (constant term first) by Horner's rule.
pub fn poly_eval(coeffs: &[PadicNum], x: &PadicNum) -> PadicNum {
    let mut acc = coeffs.last().cloned().unwrap_or_else(|| PadicNum::zero(x.p, x.abs_prec()));
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul_ref(x).add_ref(c);
    }
    acc
}

/// Lift a simple root `r0` mod p of an integral polynomial to precision `abs`.
pub fn hensel_root(coeffs: &[PadicNum], r0: u64, abs: i64) -> Result<PadicNum, PadicError> {
    let p = coeffs[0].p;
    let deriv: Vec<PadicNum> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(&BigInt::from(i))).collect();
    let mut x = PadicNum::from_int(p, r0, abs);
    let d0 = poly_eval(&deriv, &x);
    if !d0.is_unit() {
        return Err(PadicError::NoRoot("root mod p is not simple".into()));
    }
    if !poly_eval(coeffs, &x).truncate(1).is_zero() {
        return Err(PadicError::NoRoot("not a root mod p".into()));
    }
    let mut good = 1i64;
    while good < abs {
        let fx = poly_eval(coeffs, &x);
        let dx = poly_eval(&deriv, &x);
        x = x.sub_ref(&fx.checked_div(&dx)?).truncate(abs);
        good *= 2;
    }
    let fx = poly_eval(coeffs, &x);
    let dx = poly_eval(&deriv, &x);
    x = x.sub_ref(&fx.checked_div(&dx)?).truncate(abs);
    Ok(x)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Binomial coefficients `C(e, n)` for `n < count`, for an integral exponent.
///
/// The falling factorial is formed modulo `p^(N + ord_p((count-1)!))` before
/// dividing by `n!`. Coefficient `n` is delivered mod `p^N` when `e` carries at
/// least `N + ord_p(n!)` digits, and otherwise at the reduced precision
/// `abs_prec(e) - ord_p(n!)`.
pub fn binomials(e: &PadicNum, count: usize, abs: i64) -> Result<Vec<PadicNum>, PadicError> {
    let p = e.p;
    let lift = e.to_bigint().ok_or(PadicError::NotIntegral)?;
    let boost = ord_factorial(count.saturating_sub(1) as u64, p) as i64;
    let modulus = big_pow(p, (abs + boost).max(0) as u32);
    let mut falling = BigInt::one();
    let mut fact_unit = BigInt::one();
    let mut fact_ord: u32 = 0;
    let mut out = Vec::with_capacity(count);
    let target_mod = big_pow(p, abs.max(0) as u32);
    for n in 0..count {
        if n > 0 {
            falling = (falling * (&lift - BigInt::from(n - 1))).mod_floor(&modulus);
            let mut k = n as u64;
            while k.is_multiple_of(p) {
                k /= p;
                fact_ord += 1;
            }
            fact_unit = (fact_unit * BigInt::from(k)).mod_floor(&target_mod);
        }
        let pf = big_pow(p, fact_ord);
        debug_assert!((&falling % &pf).is_zero());
        let reduced = (&falling / &pf).mod_floor(&target_mod);
        let inv = mod_inverse(&fact_unit, &target_mod).unwrap_or_else(BigInt::zero);
        let known = (e.abs_prec() - fact_ord as i64).min(abs);
        out.push(PadicNum::from_int(p, (reduced * inv).mod_floor(&target_mod), known));
    }
    Ok(out)
}

impl Add for PadicNum {
    type Output = PadicNum;
    fn add(self, rhs: PadicNum) -> PadicNum {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn add(self, rhs: &PadicNum) -> PadicNum {
        self.add_ref(rhs)
    }
}

impl Sub for PadicNum {
    type Output = PadicNum;
    fn sub(self, rhs: PadicNum) -> PadicNum {
        self.sub_ref(&rhs)
    }
}

impl<'a> Sub<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn sub(self, rhs: &PadicNum) -> PadicNum {
        self.sub_ref(rhs)
    }
}

impl Mul for PadicNum {
    type Output = PadicNum;
    fn mul(self, rhs: PadicNum) -> PadicNum {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a PadicNum> for &'a PadicNum {
    type Output = PadicNum;
    fn mul(self, rhs: &PadicNum) -> PadicNum {
        self.mul_ref(rhs)
    }
}

impl Neg for PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        self.neg_ref()
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, n: i64) -> PadicNum {
        PadicNum::from_int(p, n, 40)
    }

    #[test]
    fn ord_of_p_is_one() {
        assert_eq!(z(5, 5).ord(), Valuation::int(1));
        assert_eq!(z(3, 18).ord(), Valuation::int(2));
        assert!(!z(3, 0).ord().is_finite());
    }

    #[test]
    fn zero_reports_its_precision() {
        let x = z(5, 5).sub_ref(&z(5, 5));
        assert_eq!(x.ord(), Valuation::infinite(40));
        assert_eq!(x.ord_exact(), Err(PadicError::PrecisionExhausted(40)));
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(z(5, 1).teichmuller().unwrap(), z(5, 1));
        let w = z(5, 2).teichmuller().unwrap();
        assert_eq!(w.residue(), 2);
        assert_eq!(w.pow(4), z(5, 1));
        let m1 = z(3, -1).teichmuller().unwrap();
        assert_eq!(m1, z(3, -1));
        assert_eq!(z(5, 10).teichmuller(), Err(PadicError::NotAUnit));
    }

    #[test]
    fn teichmuller_oracle_by_iteration() {
        // Independent route: iterate x -> x^p until the value stabilizes.
        let p = 7;
        for a in 1..7 {
            let mut x = z(p, a);
            for _ in 0..45 {
                x = x.pow(p);
            }
            assert_eq!(z(p, a).teichmuller().unwrap(), x);
        }
    }

    #[test]
    fn log_examples() {
        assert!(z(5, 1).log_one_unit().unwrap().is_zero());
        let l1 = z(5, 6).log_one_unit().unwrap();
        assert_eq!(l1.ord(), Valuation::int(1));
        let l2 = z(5, 36).log_one_unit().unwrap();
        assert_eq!(l2.checked_div(&l1).unwrap().truncate(38), z(5, 2).truncate(38));
        assert_eq!(z(5, 2).log_one_unit(), Err(PadicError::NotOneUnit));
    }

    #[test]
    fn exp_inverts_log() {
        for u in [6i64, 11, 31, 1 + 25 * 7] {
            let x = z(5, u);
            let back = x.log_one_unit().unwrap().exp().unwrap();
            assert!(back.congruent(&x), "u = {u}");
        }
    }

    #[test]
    fn rational_embedding() {
        let half = PadicNum::from_ratio(5, 1, 2, 40);
        assert_eq!(half.mul_ref(&z(5, 2)), z(5, 1));
        let fifth = PadicNum::from_ratio(5, 1, 5, 40);
        assert_eq!(fifth.shift(), -1);
        assert_eq!(fifth.mul_ref(&z(5, 5)).truncate(39), z(5, 1).truncate(39));
    }

    #[test]
    fn binomials_of_minus_one_alternate() {
        let e = PadicNum::from_int(3, -1, 44);
        let b = binomials(&e, 10, 40).unwrap();
        for (n, c) in b.iter().enumerate() {
            let expect = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(*c, z(3, expect), "n = {n}");
        }
    }

    #[test]
    fn binomial_precision_tracks_the_exponent() {
        let b = binomials(&z(3, -1), 10, 40).unwrap();
        assert_eq!(b[2].abs_prec(), 40);
        assert_eq!(b[3].abs_prec(), 39);
        assert_eq!(b[9].abs_prec(), 36);
        assert!(b[9].congruent(&z(3, -1)));
    }

    #[test]
    fn binomials_of_p_divisible() {
        let b = binomials(&z(5, 5), 6, 40).unwrap();
        for n in 1..5 {
            assert!(b[n].ord() >= Valuation::int(1));
        }
        assert!(b[5].congruent(&z(5, 1)));
    }

    #[test]
    fn binomial_of_half() {
        let e = PadicNum::from_ratio(5, 1, 2, 40);
        let b = binomials(&e, 3, 40).unwrap();
        assert_eq!(b[2].abs_prec(), 40);
        assert_eq!(b[2], PadicNum::from_ratio(5, -1, 8, 40));
    }

    #[test]
    fn sqrt_of_minus_one_mod_5() {
        let [a, b] = z(5, -1).sqrt().unwrap();
        assert_eq!(a.residue(), 2);
        assert_eq!(b.residue(), 3);
        assert_eq!(a.mul_ref(&a), z(5, -1));
        assert!(z(5, 2).sqrt().is_none());
    }
}
