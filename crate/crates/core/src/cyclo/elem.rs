use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{reduce, square_divides, Coeff};
use super::CycloError;
use crate::arith::{euler_phi, factor, gcd, lcm, mod_inv};

/// An element of Q(ζ_n) in the power basis `1, ζ_n, …, ζ_n^{φ(n)−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo<C: Coeff> {
    n: u64,
    coeffs: Vec<C>,
}

/// Exact cyclotomic integer.
pub type CycloInt = Cyclo<i64>;

/// Exact element of a cyclotomic field with rational coordinates.
pub type CycloNum = Cyclo<BigRational>;

impl<C: Coeff> Cyclo<C> {
    /// Build from a coefficient list in powers of ζ_n (any length).
    pub fn from_poly(n: u64, coeffs: Vec<C>) -> Self {
        assert!(n >= 1, "conductor must be positive");
        Cyclo { n, coeffs: reduce(n, coeffs) }
    }

    /// Build from `(exponent, coefficient)` pairs; exponents are taken mod n.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(n: u64, terms: I) -> Self {
        let mut v = vec![C::zero(); n as usize];
        for (e, c) in terms {
            let k = e.rem_euclid(n as i64) as usize;
            v[k] = v[k].add(&c);
        }
        Self::from_poly(n, v)
    }

    pub fn zero(n: u64) -> Self {
        Cyclo { n, coeffs: vec![C::zero(); euler_phi(n) as usize] }
    }

    pub fn constant(n: u64, c: C) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = c;
        z
    }

    pub fn one(n: u64) -> Self {
        Self::constant(n, C::one())
    }

    pub fn from_int(n: u64, v: i64) -> Self {
        Self::constant(n, C::from_i64(v))
    }

    /// ζ_n^a.
    pub fn root(n: u64, a: i64) -> Self {
        Self::from_terms(n, [(a, C::one())])
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.n)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<C> {
        let r = self.restrict(1)?;
        Some(r.coeffs[0].clone())
    }

    /// Coefficients in a redundant length-n representation indexed by exponent.
    pub fn redundant(&self) -> Vec<C> {
        let mut v = self.coeffs.clone();
        v.resize(self.n as usize, C::zero());
        v
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Cyclo<D> {
        Cyclo { n: self.n, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Image in Q(ζ_m) for a multiple m of the conductor.
    pub fn embed(&self, m: u64) -> Result<Self, CycloError> {
        if !m.is_multiple_of(self.n) {
            return Err(CycloError::BadConductor { from: self.n, to: m });
        }
        if m == self.n {
            return Ok(self.clone());
        }
        let s = (m / self.n) as i64;
        Ok(Self::from_terms(m, self.coeffs.iter().enumerate().map(|(j, c)| (j as i64 * s, c.clone()))))
    }

    /// Both operands moved to the least common conductor.
    pub fn align(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        let m = lcm(a.n, b.n);
        (a.embed(m).unwrap(), b.embed(m).unwrap())
    }

    /// Equality as field elements, regardless of the conductor used.
    pub fn value_eq(&self, o: &Self) -> bool {
        let (a, b) = Self::align(self, o);
        a == b
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if self.n != o.n {
            let (a, b) = Self::align(self, o);
            return a.add_ref(&b);
        }
        Cyclo { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x.add(y)).collect() }
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        if self.n != o.n {
            let (a, b) = Self::align(self, o);
            return a.sub_ref(&b);
        }
        Cyclo { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x.sub(y)).collect() }
    }

    pub fn neg_ref(&self) -> Self {
        self.map_coeffs(C::neg)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.n != o.n {
            let (a, b) = Self::align(self, o);
            return a.mul_ref(&b);
        }
        let len = self.coeffs.len();
        let mut prod = vec![C::zero(); 2 * len - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = prod[i + j].add(&x.mul(y));
                }
            }
        }
        Self::from_poly(self.n, prod)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.n);
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

    /// σ_a : ζ_n ↦ ζ_n^a for `gcd(a, n) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        debug_assert_eq!(gcd(a.rem_euclid(self.n as i64) as u64, self.n), 1);
        Self::from_terms(self.n, self.coeffs.iter().enumerate().map(|(j, c)| (j as i64 * a, c.clone())))
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Coordinates in Q(ζ_{n/ℓ}) if the element lies there.
    fn restrict_prime(&self, l: u64) -> Option<Self> {
        let n = self.n;
        let m = n / l;
        if square_divides(n, l) {
            // Φ_n(x) = Φ_m(x^ℓ): the basis splits by exponent residue mod ℓ.
            let mut out = Vec::with_capacity(self.coeffs.len() / l as usize);
            for (j, c) in self.coeffs.iter().enumerate() {
                if (j as u64).is_multiple_of(l) {
                    out.push(c.clone());
                } else if !c.is_zero() {
                    return None;
                }
            }
            return Some(Cyclo { n: m, coeffs: out });
        }
        // Q(ζ_n) = Q(ζ_m) ⊗ Q(ζ_ℓ) with ζ_n^j = ζ_m^{ja} ζ_ℓ^{jb}.
        let a = if m == 1 { 0 } else { mod_inv(l as i64, m as i64).unwrap() };
        let b = mod_inv((m % l) as i64, l as i64).unwrap();
        let mut grid = vec![vec![C::zero(); m as usize]; l as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = (j as i64 * a).rem_euclid(m as i64) as usize;
            let y = (j as i64 * b).rem_euclid(l as i64) as usize;
            grid[y][x] = grid[y][x].add(c);
        }
        let top = grid.pop().unwrap();
        for row in grid.iter_mut() {
            for (x, c) in top.iter().enumerate() {
                row[x] = row[x].sub(c);
            }
        }
        let mut rows = grid.into_iter().map(|r| reduce(m, r));
        let base = rows.next().unwrap();
        for r in rows {
            if r.iter().any(|c| !c.is_zero()) {
                return None;
            }
        }
        Some(Cyclo { n: m, coeffs: base })
    }

    /// Coordinates in Q(ζ_k) for `k | n`, if the element lies in that subfield.
    pub fn restrict(&self, k: u64) -> Option<Self> {
        if k == 0 || !self.n.is_multiple_of(k) {
            return None;
        }
        let mut cur = self.clone();
        while cur.n != k {
            let l = factor(cur.n / k)[0].0;
            cur = cur.restrict_prime(l)?;
        }
        Some(cur)
    }

    /// Express in the smallest cyclotomic field containing the element.
    pub fn normalize_conductor(&self) -> Self {
        let mut cur = self.clone();
        'outer: loop {
            for (l, _) in factor(cur.n) {
                if let Some(r) = cur.restrict_prime(l) {
                    cur = r;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Orbit of the element under `Gal(Q(ζ_n)/Q(ζ_k))`, in order of `a`.
    pub fn galois_orbit(&self, k: u64) -> Result<Vec<Self>, CycloError> {
        if !self.n.is_multiple_of(k) {
            return Err(CycloError::BadConductor { from: self.n, to: k });
        }
        let mut seen: Vec<Self> = Vec::new();
        for a in fixing_group(self.n, k) {
            let s = self.galois(a as i64);
            if !seen.contains(&s) {
                seen.push(s);
            }
        }
        Ok(seen)
    }

    /// Field trace from Q(ζ_n) down to Q(ζ_k), returned with conductor k.
    pub fn trace_to_subfield(&self, k: u64) -> Result<Self, CycloError> {
        if !self.n.is_multiple_of(k) {
            return Err(CycloError::BadConductor { from: self.n, to: k });
        }
        let sum =
            fixing_group(self.n, k).into_iter().fold(Self::zero(self.n), |acc, a| acc.add_ref(&self.galois(a as i64)));
        sum.restrict(k).ok_or(CycloError::NotInSubfield(k))
    }
}

const DIRECT_INVERSE_DIM: usize = 12;

/// `{a mod n : gcd(a, n) = 1, a ≡ 1 mod k}`, the group fixing Q(ζ_k).
pub fn fixing_group(n: u64, k: u64) -> Vec<u64> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|&a| gcd(a, n) == 1 && a % k == 1 % k).collect()
}

impl CycloInt {
    pub fn to_num(&self) -> CycloNum {
        self.map_coeffs(|c| BigRational::from_integer(BigInt::from(*c)))
    }

    /// Sum of absolute coordinate values (a crude size measure).
    pub fn l1(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

impl CycloNum {
    /// Back to integer coordinates, if every coordinate is an integer in range.
    pub fn to_int(&self) -> Option<CycloInt> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<i64>>>()?;
        Some(Cyclo { n: self.n, coeffs })
    }

    pub fn from_ratio(n: u64, num: i64, den: i64) -> Self {
        Self::constant(n, BigRational::new(num.into(), den.into()))
    }

    /// Multiplicative inverse.
    ///
    /// With `q` a prime dividing `n`, `β = Π σ(α)` over the nontrivial
    /// `σ ∈ Gal(Q(ζ_n)/Q(ζ_{n/q}))` gives `αβ ∈ Q(ζ_{n/q})`, so
    /// `α⁻¹ = β · (αβ)⁻¹` descends the tower; small fields are solved over Q.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.coeffs.len() <= DIRECT_INVERSE_DIM {
            return self.inverse_direct();
        }
        let (q, _) = *factor(self.n).last()?;
        let m = self.n / q;
        let beta = fixing_group(self.n, m)
            .into_iter()
            .filter(|&s| s != 1)
            .fold(Self::one(self.n), |acc, s| acc.mul_ref(&self.galois(s as i64)));
        let norm = self.mul_ref(&beta).restrict(m)?;
        Some(beta.mul_ref(&norm.inverse()?.embed(self.n).ok()?))
    }

    /// Solve `α · x = 1` as a linear system over Q.
    fn inverse_direct(&self) -> Option<Self> {
        let dim = self.coeffs.len();
        // Column j holds the coordinates of α·ζ^j.
        let cols: Vec<CycloNum> = (0..dim).map(|j| self.mul_ref(&Self::root(self.n, j as i64))).collect();
        let mut m: Vec<Vec<BigRational>> = (0..dim)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(if i == 0 { <BigRational as One>::one() } else { <BigRational as Zero>::zero() });
                row
            })
            .collect();
        let x = solve_rational(&mut m)?;
        Some(Cyclo { n: self.n, coeffs: x })
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        Some(self.mul_ref(&o.inverse()?))
    }
}

/// Gauss–Jordan elimination on an augmented matrix.
pub(crate) fn solve_rational(m: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !Zero::is_zero(&m[r][col]))?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !Zero::is_zero(&m[r][col]) {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

impl<C: Coeff> Add for Cyclo<C> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl<'a, C: Coeff> Add<&'a Cyclo<C>> for &'a Cyclo<C> {
    type Output = Cyclo<C>;
    fn add(self, o: &Cyclo<C>) -> Cyclo<C> {
        self.add_ref(o)
    }
}

impl<C: Coeff> Sub for Cyclo<C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl<'a, C: Coeff> Sub<&'a Cyclo<C>> for &'a Cyclo<C> {
    type Output = Cyclo<C>;
    fn sub(self, o: &Cyclo<C>) -> Cyclo<C> {
        self.sub_ref(o)
    }
}

impl<C: Coeff> Mul for Cyclo<C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<'a, C: Coeff> Mul<&'a Cyclo<C>> for &'a Cyclo<C> {
    type Output = Cyclo<C>;
    fn mul(self, o: &Cyclo<C>) -> Cyclo<C> {
        self.mul_ref(o)
    }
}

impl<C: Coeff> Neg for Cyclo<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<C: Coeff> fmt::Display for Cyclo<C> {
    /// `n; c0,c1,…`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}; {}", self.n, cs.join(","))
    }
}

/// A root of unity `ζ_n^a`, stored with `0 ≤ a < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    n: u64,
    a: u64,
}

impl RootOfUnity {
    pub fn new(n: u64, a: i64) -> Self {
        assert!(n >= 1);
        RootOfUnity { n, a: a.rem_euclid(n as i64) as u64 }
    }

    pub fn one() -> Self {
        RootOfUnity { n: 1, a: 0 }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn exponent(&self) -> u64 {
        self.a
    }

    /// Exact multiplicative order.
    pub fn order(&self) -> u64 {
        self.n / gcd(self.a, self.n)
    }

    /// The same root written with its exact order as modulus.
    pub fn reduced(&self) -> Self {
        let g = gcd(self.a, self.n);
        RootOfUnity { n: self.n / g, a: self.a / g }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = lcm(self.n, o.n);
        let a = self.a * (m / self.n) + o.a * (m / o.n);
        RootOfUnity::new(m, a as i64).reduced()
    }

    pub fn pow(&self, e: i64) -> Self {
        let a = (self.a as i128 * e as i128).rem_euclid(self.n as i128);
        RootOfUnity::new(self.n, a as i64).reduced()
    }

    pub fn to_cyclo<C: Coeff>(&self) -> Cyclo<C> {
        Cyclo::root(self.n, self.a as i64)
    }

    /// Recognize `x` as a root of unity, i.e. `±ζ_n^j` with n its conductor.
    pub fn recognize(x: &CycloInt) -> Option<Self> {
        let n = x.conductor();
        for j in 0..n as i64 {
            let z = CycloInt::root(n, j);
            if &z == x {
                return Some(RootOfUnity::new(n, j).reduced());
            }
            if z.neg_ref() == *x {
                return Some(RootOfUnity::new(2 * n, n as i64 + 2 * j).reduced());
            }
        }
        None
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.a)
    }
}

/// Parse `n; c0,c1,…` into an integer element.
pub fn parse_cyclo_int(s: &str) -> Result<CycloInt, CycloError> {
    let (n, body) =
        s.split_once(';').ok_or_else(|| CycloError::Parse(format!("expected `n; c0,c1,...`, got {s:?}")))?;
    let n: u64 = n.trim().parse().map_err(|_| CycloError::Parse(format!("bad conductor in {s:?}")))?;
    if n == 0 {
        return Err(CycloError::Parse("conductor must be positive".into()));
    }
    let coeffs = parse_list(body, |t| t.parse::<i64>().ok(), s)?;
    if coeffs.len() > euler_phi(n) as usize {
        return Ok(Cyclo::from_poly(n, coeffs));
    }
    let mut v = coeffs;
    v.resize(euler_phi(n) as usize, 0);
    Ok(Cyclo { n, coeffs: v })
}

pub(crate) fn parse_list<T>(body: &str, f: impl Fn(&str) -> Option<T>, whole: &str) -> Result<Vec<T>, CycloError> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| f(t.trim()).ok_or_else(|| CycloError::Parse(format!("bad coefficient {t:?} in {whole:?}"))))
        .collect()
}

pub(crate) fn parse_rational(t: &str) -> Option<BigRational> {
    match t.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(a.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(t.parse().ok()?)),
    }
}

/// Parse `n; q0,q1,…` with rational coordinates.
pub fn parse_cyclo_num(s: &str) -> Result<CycloNum, CycloError> {
    let (n, body) =
        s.split_once(';').ok_or_else(|| CycloError::Parse(format!("expected `n; c0,c1,...`, got {s:?}")))?;
    let n: u64 = n.trim().parse().map_err(|_| CycloError::Parse(format!("bad conductor in {s:?}")))?;
    let coeffs = parse_list(body, parse_rational, s)?;
    Ok(Cyclo::from_poly(n.max(1), coeffs))
}
