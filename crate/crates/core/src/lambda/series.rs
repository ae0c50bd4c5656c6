use std::fmt;

use num_bigint::BigInt;

use super::LambdaError;
use crate::padic::{binomials, text, PadicNum};

/// A power series `Σ a_n T^n` truncated to `L` coefficients, each known
/// modulo `p^N` for one common `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSeries {
    p: u64,
    prec: i64,
    coeffs: Vec<PadicNum>,
}

impl LambdaSeries {
    /// Coefficients are truncated to the smallest precision present (or `prec`).
    pub fn new(p: u64, prec: i64, coeffs: Vec<PadicNum>) -> Self {
        let common = coeffs.iter().map(PadicNum::abs_prec).fold(prec, i64::min);
        let coeffs = coeffs.into_iter().map(|c| c.truncate(common)).collect();
        LambdaSeries { p, prec: common, coeffs }
    }

    pub fn from_ints(p: u64, prec: i64, values: &[i64], len: usize) -> Self {
        let mut coeffs: Vec<PadicNum> = values.iter().map(|&v| PadicNum::from_int(p, v, prec)).collect();
        coeffs.resize(len, PadicNum::zero(p, prec));
        coeffs.truncate(len);
        LambdaSeries { p, prec, coeffs }
    }

    pub fn from_bigints(p: u64, prec: i64, values: &[BigInt], len: usize) -> Self {
        let mut coeffs: Vec<PadicNum> = values.iter().map(|v| PadicNum::from_int(p, v.clone(), prec)).collect();
        coeffs.resize(len, PadicNum::zero(p, prec));
        coeffs.truncate(len);
        LambdaSeries { p, prec, coeffs }
    }

    pub fn zero(p: u64, prec: i64, len: usize) -> Self {
        Self::from_ints(p, prec, &[], len)
    }

    pub fn one(p: u64, prec: i64, len: usize) -> Self {
        Self::from_ints(p, prec, &[1], len)
    }

    /// `(1 + T)^e`, with coefficient `n` equal to `C(e, n)`.
    pub fn binomial(e: &PadicNum, len: usize, prec: i64) -> Result<Self, LambdaError> {
        let coeffs = binomials(e, len, prec).map_err(|_| LambdaError::NotIntegral)?;
        Ok(Self::new(e.p(), prec, coeffs))
    }

    /// `(1 + T)^e` for an exact integer exponent, formed at the boosted
    /// exponent precision needed for every coefficient to be correct mod p^N.
    pub fn binomial_int(p: u64, e: &BigInt, len: usize, prec: i64) -> Self {
        let boost = crate::padic::ord_factorial(len.saturating_sub(1) as u64, p) as i64;
        let exact = PadicNum::from_int(p, e.clone(), prec + boost);
        Self::binomial(&exact, len, prec).expect("integer exponent is integral")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[PadicNum] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &PadicNum {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PadicNum::is_zero)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&PadicNum, &PadicNum) -> PadicNum) -> Self {
        assert_eq!(self.p, other.p);
        let len = self.len().min(other.len());
        let coeffs = (0..len).map(|i| f(&self.coeffs[i], &other.coeffs[i])).collect();
        Self::new(self.p, self.prec.min(other.prec), coeffs)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.zip_with(other, PadicNum::add_ref)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.zip_with(other, PadicNum::sub_ref)
    }

    /// Product truncated to the shorter length.
    pub fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p);
        let len = self.len().min(other.len());
        let prec = self.prec.min(other.prec);
        let mut out = vec![PadicNum::zero(self.p, prec); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(self.p, prec, out)
    }

    pub fn scale(&self, s: &PadicNum) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.mul_ref(s)).collect();
        Self::new(self.p, self.prec.max(s.abs_prec()), coeffs)
    }

    /// Render as a series file: header `p N L`, then one digit string per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.p, self.prec, self.len());
        for c in &self.coeffs {
            out.push_str(&digit_string(c));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(s: &str) -> Result<Self, LambdaError> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| LambdaError::Parse("missing header".into()))?;
        let nums: Vec<i64> = header
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| LambdaError::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_, _>>()?;
        let [p, prec, len] = nums[..] else {
            return Err(LambdaError::Parse(format!("header must be `p N L`, got {header:?}")));
        };
        let p = p as u64;
        crate::padic::check_prime(p)?;
        let mut coeffs = Vec::with_capacity(len as usize);
        for line in lines {
            coeffs.push(parse_digits(line, p, prec)?);
        }
        if coeffs.len() != len as usize {
            return Err(LambdaError::Parse(format!("expected {len} coefficient lines, found {}", coeffs.len())));
        }
        Ok(Self::new(p, prec, coeffs))
    }
}

fn digit_string(c: &PadicNum) -> String {
    let s = text::render(c);
    let body = &s[s.find('(').unwrap() + 1..s.find(")_").unwrap()];
    body.to_string()
}

/// A coefficient line: bare base-p digits, or a full `…(digits)_p + O(p^N)` literal.
fn parse_digits(line: &str, p: u64, prec: i64) -> Result<PadicNum, LambdaError> {
    if line.contains(")_") {
        return Ok(text::parse(line)?);
    }
    Ok(text::parse(&format!("…({line})_{p} + O({p}^{prec})"))?)
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let digits = digit_string(c);
            terms.push(match i {
                0 => digits,
                1 => format!("{digits}·T"),
                _ => format!("{digits}·T^{i}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(T^{}, {}^{})", terms.join(" + "), self.len(), self.p, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let s = LambdaSeries::from_ints(5, 10, &[5, 1, 0, 7], 4);
        let t = s.to_text();
        assert_eq!(t, "5 10 4\n10\n1\n0\n12\n");
        assert_eq!(LambdaSeries::parse_text(&t).unwrap(), s);
    }

    #[test]
    fn binomial_multiplicativity_small() {
        let a = LambdaSeries::binomial_int(3, &BigInt::from(4), 12, 20);
        let b = LambdaSeries::binomial_int(3, &BigInt::from(-7), 12, 20);
        let c = LambdaSeries::binomial_int(3, &BigInt::from(-3), 12, 20);
        assert_eq!(a.mul_ref(&b), c);
    }

    #[test]
    fn geometric_series() {
        let s = LambdaSeries::binomial_int(5, &BigInt::from(-1), 10, 30);
        for (n, c) in s.coeffs().iter().enumerate() {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(*c, PadicNum::from_int(5, sign, 30));
        }
    }
}
