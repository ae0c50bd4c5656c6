use std::collections::HashMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{divisors, factor, moebius, radical};

/// Coefficient ring for cyclotomic elements.
pub trait Coeff: Clone + PartialEq + Eq + Hash + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;

    fn mul_i64(&self, v: i64) -> Self {
        self.mul(&Self::from_i64(v))
    }
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn add(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("cyclotomic integer coefficient overflow")
    }
    fn sub(&self, o: &Self) -> Self {
        self.checked_sub(*o).expect("cyclotomic integer coefficient overflow")
    }
    fn mul(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("cyclotomic integer coefficient overflow")
    }
    fn neg(&self) -> Self {
        self.checked_neg().expect("cyclotomic integer coefficient overflow")
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
}

/// Dense coefficients of Φ_n, constant term first.
pub type CycloPoly = Arc<Vec<i64>>;

fn cache() -> &'static RwLock<HashMap<u64, CycloPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, CycloPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn poly_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = a.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + db];
        q[k] = c;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= c * bi;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

fn x_pow_minus_one(d: u64) -> Vec<i64> {
    let mut v = vec![0i64; d as usize + 1];
    v[0] = -1;
    v[d as usize] = 1;
    v
}

fn compute(n: u64) -> Vec<i64> {
    let r = radical(n);
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for d in divisors(r) {
        match moebius(r / d) {
            1 => num = poly_mul(&num, &x_pow_minus_one(d)),
            -1 => den = poly_mul(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    let base = poly_div_monic(&num, &den);
    let stretch = (n / r) as usize;
    let mut out = vec![0i64; (base.len() - 1) * stretch + 1];
    for (i, c) in base.into_iter().enumerate() {
        out[i * stretch] = c;
    }
    out
}

/// The n-th cyclotomic polynomial (cached).
pub fn cyclotomic(n: u64) -> CycloPoly {
    assert!(n >= 1);
    if let Some(p) = cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let poly = Arc::new(compute(n));
    cache().write().unwrap().insert(n, poly.clone());
    poly
}

/// Reduce a polynomial (constant term first) modulo Φ_n in place, returning
/// the first φ(n) coefficients.
pub fn reduce<C: Coeff>(n: u64, mut v: Vec<C>) -> Vec<C> {
    let phi = cyclotomic(n);
    let deg = phi.len() - 1;
    let lower: Vec<(usize, i64)> =
        phi[..deg].iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect();
    for j in (deg..v.len()).rev() {
        if v[j].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut v[j], C::zero());
        for &(i, pc) in &lower {
            let k = j - deg + i;
            v[k] = v[k].sub(&c.mul_i64(pc));
        }
    }
    v.resize(deg, C::zero());
    v
}

/// Whether `ℓ^2 | n` for the prime ℓ.
pub(crate) fn square_divides(n: u64, l: u64) -> bool {
    factor(n).iter().any(|&(q, e)| q == l && e >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic(1), vec![-1, 1]);
        assert_eq!(*cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(*cyclotomic(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn reduction_kills_phi() {
        let v: Vec<i64> = cyclotomic(15).to_vec();
        assert!(reduce(15, v).iter().all(|&c| c == 0));
    }
}
