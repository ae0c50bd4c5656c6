use std::fmt;

use num_integer::Integer;

use super::ModformsError;
use crate::arith::kronecker;
use crate::cyclo::{sqrt_minus_d_cyclo, CycloInt, CycloNum, QuadCycloNum, RootOfUnity};

/// Absolute discriminants of the imaginary quadratic fields of class number one.
pub const CLASS_NUMBER_ONE: [u64; 9] = [3, 4, 7, 8, 11, 19, 43, 67, 163];

/// `x + yω` in the ring of integers, with `ω = i`, `√−2` or `(1 + √−D)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub x: i64,
    pub y: i64,
}

impl QuadInt {
    pub const fn new(x: i64, y: i64) -> Self {
        QuadInt { x, y }
    }

    pub const fn int(x: i64) -> Self {
        QuadInt { x, y: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => write!(f, "{y}ω"),
            (x, y) if y < 0 => write!(f, "{x}{y}ω"),
            (x, y) => write!(f, "{x}+{y}ω"),
        }
    }
}

/// How a rational prime decomposes in the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        })
    }
}

/// An imaginary quadratic field Q(√−D) of class number one, with its ring
/// of integers written in the basis `1, ω` where `ω² = tω − n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImagQuadField {
    disc: u64,
    t: i64,
    n: i64,
}

impl ImagQuadField {
    pub fn new(disc: u64) -> Result<Self, ModformsError> {
        if !CLASS_NUMBER_ONE.contains(&disc) {
            return Err(ModformsError::ClassNumberNotOne(disc));
        }
        let (t, n) = match disc {
            4 => (0, 1),
            8 => (0, 2),
            _ => (1, (disc as i64 + 1) / 4),
        };
        Ok(ImagQuadField { disc, t, n })
    }

    /// The absolute discriminant D.
    pub fn disc(&self) -> u64 {
        self.disc
    }

    /// The squarefree d with E = Q(√−d).
    pub fn d(&self) -> u64 {
        match self.disc {
            4 => 1,
            8 => 2,
            other => other,
        }
    }

    pub fn norm(&self, a: QuadInt) -> i64 {
        a.x * a.x + self.t * a.x * a.y + self.n * a.y * a.y
    }

    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        QuadInt { x: a.x * b.x - self.n * a.y * b.y, y: a.x * b.y + a.y * b.x + self.t * a.y * b.y }
    }

    pub fn add(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        QuadInt::new(a.x + b.x, a.y + b.y)
    }

    pub fn sub(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        QuadInt::new(a.x - b.x, a.y - b.y)
    }

    pub fn neg(&self, a: QuadInt) -> QuadInt {
        QuadInt::new(-a.x, -a.y)
    }

    pub fn conj(&self, a: QuadInt) -> QuadInt {
        QuadInt::new(a.x + self.t * a.y, -a.y)
    }

    pub fn pow(&self, a: QuadInt, e: u32) -> QuadInt {
        (0..e).fold(QuadInt::int(1), |acc, _| self.mul(acc, a))
    }

    /// `a / b` when it lies in the ring of integers.
    pub fn div_exact(&self, a: QuadInt, b: QuadInt) -> Option<QuadInt> {
        let nb = self.norm(b);
        if nb == 0 {
            return None;
        }
        let num = self.mul(a, self.conj(b));
        if num.x % nb != 0 || num.y % nb != 0 {
            return None;
        }
        Some(QuadInt::new(num.x / nb, num.y / nb))
    }

    /// `ω·a`, as used for the lattice `aO`.
    fn mul_omega(&self, a: QuadInt) -> QuadInt {
        self.mul(a, QuadInt::new(0, 1))
    }

    /// The global units, starting with 1.
    pub fn units(&self) -> Vec<QuadInt> {
        match self.disc {
            4 => vec![QuadInt::int(1), QuadInt::new(0, 1), QuadInt::int(-1), QuadInt::new(0, -1)],
            3 => {
                let w = QuadInt::new(0, 1);
                (0..6).map(|j| self.pow(w, j)).collect()
            }
            _ => vec![QuadInt::int(1), QuadInt::int(-1)],
        }
    }

    pub fn unit_count(&self) -> usize {
        self.units().len()
    }

    pub fn splitting(&self, l: u64) -> Splitting {
        match kronecker(-(self.disc as i64), l) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }

    /// `ω` as an element of Z[ζ_D].
    pub fn omega_cyclo(&self) -> CycloInt {
        let root = sqrt_minus_d_cyclo(self.d());
        let w = if self.t == 0 {
            root
        } else {
            root.add_ref(&CycloNum::one(root.conductor())).scale(&num_rational::BigRational::new(1.into(), 2.into()))
        };
        w.to_int().expect("ω is integral").normalize_conductor()
    }

    /// The image of `a` in Z[ζ_D].
    pub fn to_cyclo(&self, a: QuadInt) -> CycloInt {
        let w = self.omega_cyclo();
        let n = w.conductor();
        CycloInt::from_int(n, a.x).add_ref(&w.scale(&a.y))
    }

    pub fn to_cyclo_with(&self, omega: &CycloInt, a: QuadInt) -> CycloInt {
        CycloInt::from_int(omega.conductor(), a.x).add_ref(&omega.scale(&a.y))
    }

    /// `a` as `u + v√−d` with rational `u, v`.
    pub fn to_quad(&self, a: QuadInt) -> QuadCycloNum {
        let d = self.d();
        let (u, v) = if self.t == 0 {
            (CycloNum::from_int(1, a.x), CycloNum::from_int(1, a.y))
        } else {
            (CycloNum::from_ratio(1, 2 * a.x + a.y, 2), CycloNum::from_ratio(1, a.y, 2))
        };
        QuadCycloNum::new(1, d, u, v).expect("squarefree d")
    }

    /// The unit `u` as a root of unity.
    pub fn unit_root(&self, u: QuadInt) -> Option<RootOfUnity> {
        RootOfUnity::recognize(&self.to_cyclo(u))
    }

    /// Nonzero elements of norm at most `bound`.
    pub fn elements_up_to(&self, bound: u64) -> Vec<QuadInt> {
        let b = bound as i64;
        // 4N = (2x + ty)² + (4n − t²)y² bounds y, then x.
        let disc = 4 * self.n - self.t * self.t;
        let ymax = ((4 * b) as f64 / disc as f64).sqrt().floor() as i64 + 1;
        let mut out = Vec::new();
        for y in -ymax..=ymax {
            let xmax = (b as f64).sqrt().floor() as i64 + y.abs() + 1;
            for x in -xmax..=xmax {
                let a = QuadInt::new(x, y);
                let nm = self.norm(a);
                if nm > 0 && nm <= b {
                    out.push(a);
                }
            }
        }
        out
    }

    /// An element of norm `l`, if one exists.
    pub fn element_of_norm(&self, l: u64) -> Option<QuadInt> {
        self.elements_up_to(l).into_iter().find(|&a| self.norm(a) == l as i64)
    }
}

/// Canonical residues modulo a principal ideal `(μ)`.
///
/// The lattice `μO` has a basis `(c, 0), (e, f)` in coordinates `(x, y)`;
/// residues are the points with `0 ≤ x < c`, `0 ≤ y < f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    field: ImagQuadField,
    gen: QuadInt,
    c: i64,
    e: i64,
    f: i64,
}

impl ResidueRing {
    pub fn new(field: ImagQuadField, gen: QuadInt) -> Result<Self, ModformsError> {
        if gen.is_zero() {
            return Err(ModformsError::DomainError("modulus must be nonzero".into()));
        }
        let v1 = gen;
        let v2 = field.mul_omega(gen);
        let g = v1.y.extended_gcd(&v2.y);
        let (e, f) = if g.gcd == 0 { (0, 1) } else { (g.x * v1.x + g.y * v2.x, g.gcd) };
        let (e, f) = if f < 0 { (-e, -f) } else { (e, f) };
        let c = field.norm(gen) / f;
        Ok(ResidueRing { field, gen, c, e, f })
    }

    pub fn generator(&self) -> QuadInt {
        self.gen
    }

    pub fn size(&self) -> u64 {
        (self.c * self.f) as u64
    }

    pub fn reduce(&self, a: QuadInt) -> QuadInt {
        let k = a.y.div_euclid(self.f);
        let x = (a.x - k * self.e).rem_euclid(self.c);
        QuadInt::new(x, a.y - k * self.f)
    }

    pub fn mul(&self, a: QuadInt, b: QuadInt) -> QuadInt {
        self.reduce(self.field.mul(a, b))
    }

    /// Whether `a` is invertible modulo the ideal: the lattice spanned by
    /// `a`, `aω`, `μ`, `μω` must be all of Z².
    pub fn is_unit(&self, a: QuadInt) -> bool {
        let vs = [a, self.field.mul_omega(a), self.gen, self.field.mul_omega(self.gen)];
        let mut g = 0i64;
        for i in 0..4 {
            for j in i + 1..4 {
                g = g.gcd(&(vs[i].x * vs[j].y - vs[i].y * vs[j].x));
            }
        }
        g == 1
    }

    pub fn residues(&self) -> impl Iterator<Item = QuadInt> + '_ {
        (0..self.f).flat_map(move |y| (0..self.c).map(move |x| QuadInt::new(x, y)))
    }

    pub fn units(&self) -> Vec<QuadInt> {
        self.residues().filter(|&r| self.is_unit(r)).collect()
    }
}
