use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::RigidityError;
use crate::arith::{gcd, lcm};
use crate::cyclo::{parse_cyclo_int, CycloInt, RootOfUnity};
use crate::lambda::{LambdaSeries, SpecPoint};
use crate::padic::{PadicCyclo, PadicNum};

/// Absolute precision given to exponents written as plain integers in a form file.
pub const INTEGER_EXPONENT_PREC: i64 = 64;

/// One summand `d·(1+T)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: CycloInt,
    pub exp: PadicNum,
}

/// `Σ d_i (1+T)^{e_i}` with cyclotomic integer coefficients and p-adic exponents.
///
/// Terms are kept canonical: exponents pairwise distinct at their precision,
/// no zero coefficients, coefficients at their minimal conductor, and terms
/// sorted by the exponent representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialForm {
    p: u64,
    terms: Vec<Term>,
}

fn rep(e: &PadicNum) -> BigInt {
    e.to_bigint().unwrap_or_default()
}

impl ExponentialForm {
    pub fn new(p: u64, terms: impl IntoIterator<Item = (CycloInt, PadicNum)>) -> Self {
        let mut merged: Vec<Term> = Vec::new();
        for (coeff, exp) in terms {
            match merged.iter_mut().find(|t| t.exp.congruent(&exp)) {
                Some(t) => t.coeff = t.coeff.add_ref(&coeff),
                None => merged.push(Term { coeff, exp }),
            }
        }
        let mut terms: Vec<Term> = merged
            .into_iter()
            .filter(|t| !t.coeff.is_zero())
            .map(|t| Term { coeff: t.coeff.normalize_conductor(), exp: t.exp })
            .collect();
        terms.sort_by_key(|t| rep(&t.exp));
        ExponentialForm { p, terms }
    }

    pub fn empty(p: u64) -> Self {
        ExponentialForm { p, terms: Vec::new() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least common conductor of the coefficients.
    pub fn conductor(&self) -> u64 {
        self.terms.iter().fold(1, |acc, t| lcm(acc, t.coeff.conductor()))
    }

    /// The prime-to-p part of [`ExponentialForm::conductor`].
    pub fn tame_conductor(&self) -> u64 {
        let mut n = self.conductor();
        while n.is_multiple_of(self.p) {
            n /= self.p;
        }
        n
    }

    /// Exponents reduced mod `p^n`, in `[0, p^n)`.
    pub fn residues(&self, n: u32) -> Vec<u64> {
        let q = BigInt::from(self.p.pow(n));
        self.terms.iter().map(|t| (rep(&t.exp) % &q).to_u64().unwrap()).collect()
    }

    /// `F(ζ − 1) = Σ d_i ζ^{e_i}` at `ζ = ζ_{p^n}^a`.
    pub fn eval_root(&self, n: u32, a: u64) -> CycloInt {
        let q = self.p.pow(n);
        let m = lcm(self.conductor(), q);
        self.terms.iter().zip(self.residues(n)).fold(CycloInt::zero(m), |acc, (t, r)| {
            let z = CycloInt::root(q, ((a as u128 * r as u128) % q as u128) as i64);
            acc.add_ref(&t.coeff.mul_ref(&z))
        })
    }

    /// All values at level n, as a sample set.
    pub fn samples(&self, n: u32) -> SampleSet {
        let q = self.p.pow(n);
        let xi = RootOfUnity::new(self.tame_conductor(), 1);
        SampleSet::new(self.p, n, xi, (0..q).map(|a| self.eval_root(n, a)).collect()).expect("one value per root")
    }

    /// The truncated power series, for forms with rational integer coefficients.
    pub fn to_series(&self, len: usize, prec: i64) -> Result<LambdaSeries, RigidityError> {
        let mut acc = LambdaSeries::zero(self.p, prec, len);
        for t in &self.terms {
            let d = t
                .coeff
                .as_rational()
                .ok_or_else(|| RigidityError::Unsupported("coefficient is not a rational integer".into()))?;
            let e = t.exp.to_bigint().ok_or(RigidityError::DegenerateInput("exponent not integral".into()))?;
            let b = LambdaSeries::binomial_int(self.p, &e, len, prec);
            acc = acc.add_ref(&b.scale(&PadicNum::from_int(self.p, d, prec)));
        }
        Ok(acc)
    }

    /// `F(P_{k,ζ}) = Σ d_i ζ^{e_i} π_i^{k−1}` with `π_i = (1+p)^{e_i}` in
    /// Z_p[ζ_{p^r}]; coefficients must have p-power conductor.
    pub fn specialize_padic(&self, point: &SpecPoint, prec: i64) -> Result<PadicCyclo, RigidityError> {
        let p = self.p;
        let mut level = point.r;
        for t in &self.terms {
            let c = t.coeff.conductor();
            let s = crate::cyclo::p_level(c, p).ok_or_else(|| {
                RigidityError::Unsupported(format!("coefficient conductor {c} is not a power of {p}"))
            })?;
            level = level.max(s);
        }
        let q = p.pow(point.r);
        let mut acc = PadicCyclo::zero(p, level, prec);
        let one_p = PadicNum::from_int(p, 1 + p as i64, prec);
        for (t, r) in self.terms.iter().zip(self.residues(point.r)) {
            let coeff = t.coeff.embed(p.pow(level))?;
            let ints: Vec<BigInt> = coeff.coeffs().iter().map(|&c| c.into()).collect();
            let d = PadicCyclo::from_int_poly(p, level, &ints, prec);
            let exp = (point.a as u128 * r as u128 % q as u128) as i64 * (p.pow(level) / q) as i64;
            let zeta = PadicCyclo::zeta(p, level, exp, prec);
            let pi = one_p.pow_big(&rep(&t.exp)).pow(point.k as u64 - 1);
            acc = acc.add_ref(&d.mul_ref(&zeta).scale(&pi));
        }
        Ok(acc)
    }
}

impl ExponentialForm {
    /// Render as a form file: header `p=<p>`, then one `term:` line per summand.
    pub fn to_text(&self) -> String {
        let mut out = format!("p={}\n", self.p);
        for t in &self.terms {
            out.push_str(&format!("term: d={} e={}\n", t.coeff, t.exp));
        }
        out
    }

    pub fn parse_text(s: &str) -> Result<Self, RigidityError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |m: &str| RigidityError::Parse(m.to_string());
        let p: u64 = lines
            .next()
            .and_then(|h| h.strip_prefix("p="))
            .and_then(|h| h.trim().parse().ok())
            .ok_or_else(|| bad("header must be `p=<prime>`"))?;
        crate::padic::check_prime(p)?;
        let mut terms = Vec::new();
        for line in lines {
            let body = line
                .strip_prefix("term:")
                .map(str::trim)
                .and_then(|b| b.strip_prefix("d="))
                .ok_or_else(|| bad("term line must be `term: d=<CycloInt> e=<p-adic>`"))?;
            let (d, e) = body.split_once(" e=").ok_or_else(|| bad("term line is missing `e=`"))?;
            let e = e.trim();
            let exp = match e.parse::<BigInt>() {
                Ok(v) => PadicNum::from_int(p, v, INTEGER_EXPONENT_PREC),
                Err(_) => crate::padic::text::parse(e)?,
            };
            if exp.p() != p {
                return Err(bad("exponent prime differs from header"));
            }
            terms.push((parse_cyclo_int(d.trim())?, exp));
        }
        Ok(Self::new(p, terms))
    }
}

impl fmt::Display for ExponentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "term: d={} e={}", t.coeff, t.exp)?;
        }
        Ok(())
    }
}

/// Values `F(ζ − 1)` for every `ζ = ζ_{p^n}^a`, `0 ≤ a < p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    p: u64,
    n: u32,
    xi: RootOfUnity,
    values: Vec<CycloInt>,
}

impl SampleSet {
    pub fn new(p: u64, n: u32, xi: RootOfUnity, values: Vec<CycloInt>) -> Result<Self, RigidityError> {
        let q = p.pow(n);
        if values.len() as u64 != q {
            return Err(RigidityError::Inconsistent(format!(
                "expected {q} samples at level {n}, got {}",
                values.len()
            )));
        }
        Ok(SampleSet { p, n, xi, values })
    }

    pub fn from_fn(p: u64, n: u32, xi: RootOfUnity, f: impl Fn(u64) -> CycloInt) -> Self {
        let values = (0..p.pow(n)).map(f).collect();
        SampleSet { p, n, xi, values }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn xi(&self) -> RootOfUnity {
        self.xi
    }

    pub fn values(&self) -> &[CycloInt] {
        &self.values
    }

    pub fn value(&self, a: u64) -> &CycloInt {
        &self.values[a as usize]
    }

    /// A copy with one value replaced.
    pub fn with_value(&self, a: u64, v: CycloInt) -> Self {
        let mut s = self.clone();
        s.values[a as usize] = v;
        s
    }

    /// Common conductor of all values and of `ζ_{p^n}`.
    pub fn conductor(&self) -> u64 {
        self.values.iter().fold(lcm(self.p.pow(self.n), self.xi.order()), |acc, v| lcm(acc, v.conductor()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} xi={}\n", self.p, self.n, self.xi);
        for (a, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{a}: {v}\n"));
        }
        out
    }

    pub fn parse_text(s: &str) -> Result<Self, RigidityError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let bad = |m: &str| RigidityError::Parse(m.to_string());
        let header = lines.next().ok_or_else(|| bad("empty sample file"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(bad("header must be `p n xi=<order>:<exp>`"));
        }
        let p: u64 = h[0].parse().map_err(|_| bad("bad p"))?;
        crate::padic::check_prime(p)?;
        let n: u32 = h[1].parse().map_err(|_| bad("bad level"))?;
        let (o, e) = h[2].strip_prefix("xi=").and_then(|x| x.split_once(':')).ok_or_else(|| bad("bad xi field"))?;
        let o: u64 = o.parse().map_err(|_| bad("bad xi order"))?;
        let e: i64 = e.parse().map_err(|_| bad("bad xi exponent"))?;
        if o == 0 {
            return Err(bad("xi order must be positive"));
        }
        let q = p.checked_pow(n).ok_or_else(|| bad("level too large"))?;
        let mut values: Vec<Option<CycloInt>> = vec![None; q as usize];
        for line in lines {
            let (a, v) = line.split_once(':').ok_or_else(|| bad("sample line must be `<a>: <value>`"))?;
            let a: u64 = a.trim().parse().map_err(|_| bad("bad sample exponent"))?;
            if a >= q {
                return Err(bad(&format!("sample exponent {a} out of range")));
            }
            values[a as usize] = Some(parse_cyclo_int(v.trim())?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(a, v)| v.ok_or_else(|| bad(&format!("missing sample {a}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, n, RootOfUnity::new(o, e), values)
    }
}

/// Whether `a` is a unit mod p.
pub(crate) fn is_primitive_exponent(a: u64, p: u64) -> bool {
    gcd(a, p) == 1
}
