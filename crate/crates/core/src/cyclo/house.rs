use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::elem::{CycloInt, CycloNum};
use crate::arith::gcd;

/// Default number of fractional bits in a house enclosure.
pub const DEFAULT_HOUSE_BITS: u32 = 160;

/// Guard bits carried beyond the requested output precision.
const GUARD: u32 = 64;

/// Bound, in units of the working precision, on the error of each tabulated
/// cosine and sine.
const TRIG_ULPS: u32 = 2;

/// A closed interval `[lo·2^−bits, hi·2^−bits]` of reals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn shift_floor(x: &BigInt, k: u32) -> BigInt {
    x.div_floor(&(BigInt::from(1) << k))
}

fn shift_ceil(x: &BigInt, k: u32) -> BigInt {
    -(-x).div_floor(&(BigInt::from(1) << k))
}

fn ceil_div(x: &BigInt, d: &BigInt) -> BigInt {
    -(-x).div_floor(d)
}

impl RealInterval {
    pub fn new(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        RealInterval { lo, hi, bits }
    }

    /// The degenerate interval at an integer.
    pub fn exact(v: i64, bits: u32) -> Self {
        let x = BigInt::from(v) << bits;
        RealInterval { lo: x.clone(), hi: x, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::from(1) << self.bits)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::from(1) << self.bits)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo().to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi().to_f64().unwrap_or(f64::NAN)
    }

    pub fn mid_f64(&self) -> f64 {
        ((self.lo() + self.hi()) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    pub fn width_f64(&self) -> f64 {
        self.width().to_f64().unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo() <= x && x <= &self.hi()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo_f64() <= x && x <= self.hi_f64()
    }

    /// Whether every point of the interval is `≤ x`: `Some(true)` if so,
    /// `Some(false)` if every point exceeds `x`, `None` if `x` is inside.
    pub fn le_rational(&self, x: &BigRational) -> Option<bool> {
        if self.hi() <= *x {
            Some(true)
        } else if self.lo() > *x {
            Some(false)
        } else {
            None
        }
    }

    /// Tri-state `self ≥ x`, as in [`RealInterval::le_rational`].
    pub fn ge_rational(&self, x: &BigRational) -> Option<bool> {
        if self.lo() >= *x {
            Some(true)
        } else if self.hi() < *x {
            Some(false)
        } else {
            None
        }
    }

    /// Tri-state `self ≤ other` over all pairs of points.
    pub fn le(&self, other: &Self) -> Option<bool> {
        if self.hi() <= other.lo() {
            Some(true)
        } else if self.lo() > other.hi() {
            Some(false)
        } else {
            None
        }
    }

    /// The same interval widened outward to `bits` fractional bits.
    pub fn rescale(&self, bits: u32) -> Self {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                RealInterval { lo: &self.lo << (bits - self.bits), hi: &self.hi << (bits - self.bits), bits }
            }
            Ordering::Less => RealInterval {
                lo: shift_floor(&self.lo, self.bits - bits),
                hi: shift_ceil(&self.hi, self.bits - bits),
                bits,
            },
        }
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        let b = self.bits.max(o.bits);
        (self.rescale(b), o.rescale(b))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (x, y) = self.aligned(o);
        RealInterval { lo: &x.lo + &y.lo, hi: &x.hi + &y.hi, bits: x.bits }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (x, y) = self.aligned(o);
        let prods = [&x.lo * &y.lo, &x.lo * &y.hi, &x.hi * &y.lo, &x.hi * &y.hi];
        let lo = prods.iter().min().unwrap();
        let hi = prods.iter().max().unwrap();
        RealInterval { lo: shift_floor(lo, x.bits), hi: shift_ceil(hi, x.bits), bits: x.bits }
    }

    pub fn square(&self) -> Self {
        let mut sq = self.mul(self);
        if self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus {
            sq.lo = BigInt::zero();
        }
        sq
    }

    fn decimal(x: &BigInt, bits: u32, digits: u32, up: bool) -> String {
        let scaled = x * BigInt::from(10).pow(digits);
        let q = if up { shift_ceil(&scaled, bits) } else { shift_floor(&scaled, bits) };
        let neg = q.is_negative();
        let s = q.abs().to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (int, frac) = s.split_at(s.len() - digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(24) as u32;
        write!(
            f,
            "[{}, {}]",
            Self::decimal(&self.lo, self.bits, digits, false),
            Self::decimal(&self.hi, self.bits, digits, true)
        )
    }
}

/// `Σ (−1)^k / ((2k+1) x^{2k+1})` in fixed point with `prec` fractional bits.
fn atan_inv(x: u64, prec: u32) -> BigInt {
    let one = BigInt::from(1) << prec;
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &one / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// π with `prec` fractional bits, error below one unit.
fn pi_fixed(prec: u32) -> BigInt {
    let extra = 32;
    let w = prec + extra;
    let pi = atan_inv(5, w) * 16 - atan_inv(239, w) * 4;
    shift_floor(&(pi + (BigInt::from(1) << (extra - 1))), extra)
}

/// `(cos 2πk/n, sin 2πk/n)` for `k = 0..n`, each within [`TRIG_ULPS`] units of
/// `2^−prec`.
fn trig_table(n: u64, prec: u32) -> Vec<(BigInt, BigInt)> {
    let extra = 32;
    let w = prec + extra;
    let one = BigInt::from(1) << w;
    let two_pi = pi_fixed(w) * 2;
    let round = |x: BigInt| shift_floor(&(x + (BigInt::from(1) << (extra - 1))), extra);
    (0..n)
        .map(|k| {
            // Reduce to an angle in (−π, π].
            let kk = k as i64 - if 2 * k > n { n as i64 } else { 0 };
            let theta = &two_pi * BigInt::from(kk) / BigInt::from(n);
            let mut cos = BigInt::zero();
            let mut sin = BigInt::zero();
            let mut term = one.clone();
            let mut m = 0u64;
            while !term.is_zero() {
                match m % 4 {
                    0 => cos += &term,
                    1 => sin += &term,
                    2 => cos -= &term,
                    _ => sin -= &term,
                }
                m += 1;
                term = &term * &theta / &one / BigInt::from(m);
            }
            (round(cos), round(sin))
        })
        .collect()
}

/// Enclosure of `max_σ |σ(Σ c_i ζ_n^i)|²` in units of `2^{−2·prec}`.
fn house_sq_raw(n: u64, coeffs: &[BigInt], prec: u32) -> (BigInt, BigInt) {
    if coeffs.iter().all(|c| c.is_zero()) {
        return (BigInt::zero(), BigInt::zero());
    }
    let table = trig_table(n, prec);
    let err: BigInt = coeffs.iter().map(|c| c.abs()).sum::<BigInt>() * TRIG_ULPS;
    let mut best: Option<(BigInt, BigInt)> = None;
    for j in (1..=n).filter(|&j| gcd(j, n) == 1) {
        let mut re = BigInt::zero();
        let mut im = BigInt::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (cs, sn) = &table[((i as u64) * j % n) as usize];
            re += c * cs;
            im += c * sn;
        }
        let bound = |x: &BigInt| {
            let a = x.abs();
            let lo = if a > err { &a - &err } else { BigInt::zero() };
            (&lo * &lo, (&a + &err) * (&a + &err))
        };
        let (rl, rh) = bound(&re);
        let (il, ih) = bound(&im);
        let (lo, hi) = (rl + il, rh + ih);
        best = Some(match best {
            None => (lo, hi),
            Some((bl, bh)) => (bl.max(lo), bh.max(hi)),
        });
    }
    best.unwrap()
}

fn integer_coeffs(x: &CycloNum) -> (Vec<BigInt>, BigInt) {
    let den = x.coeffs().iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints = x.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
    (ints, den)
}

fn sq_interval(n: u64, coeffs: &[BigInt], den: &BigInt, bits: u32) -> RealInterval {
    let prec = bits + GUARD;
    let (lo, hi) = house_sq_raw(n, coeffs, prec);
    let d2 = den * den;
    let k = 2 * prec - bits;
    RealInterval { lo: shift_floor(&lo, k).div_floor(&d2), hi: ceil_div(&shift_ceil(&hi, k), &d2), bits }
}

fn root_interval(n: u64, coeffs: &[BigInt], den: &BigInt, bits: u32) -> RealInterval {
    let prec = bits + GUARD;
    let (lo, hi) = house_sq_raw(n, coeffs, prec);
    let rlo = lo.sqrt();
    let mut rhi = hi.sqrt();
    if &rhi * &rhi < hi {
        rhi += 1;
    }
    RealInterval { lo: shift_floor(&rlo, GUARD).div_floor(den), hi: ceil_div(&shift_ceil(&rhi, GUARD), den), bits }
}

/// Certified enclosure of the house `max_σ |σ(α)|` over all embeddings of
/// Q(ζ_n), with `bits` fractional bits.
pub fn house(alpha: &CycloInt, bits: u32) -> RealInterval {
    let coeffs: Vec<BigInt> = alpha.coeffs().iter().map(|&c| BigInt::from(c)).collect();
    root_interval(alpha.conductor(), &coeffs, &BigInt::from(1), bits)
}

/// The house of a cyclotomic number with rational coordinates.
pub fn house_num(alpha: &CycloNum, bits: u32) -> RealInterval {
    let (coeffs, den) = integer_coeffs(alpha);
    root_interval(alpha.conductor(), &coeffs, &den, bits)
}

/// Enclosure of the squared house, which avoids the loss of a square root
/// when comparing against rational bounds.
pub fn house_sq(alpha: &CycloNum, bits: u32) -> RealInterval {
    let (coeffs, den) = integer_coeffs(alpha);
    sq_interval(alpha.conductor(), &coeffs, &den, bits)
}
