use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use super::{LambdaError, LambdaSeries};
use crate::padic::{PadicCyclo, PadicNum, Valuation};

/// The arithmetic point `T ↦ ζ(1+p)^{k−1} − 1` with `ζ = ζ_{p^r}^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpecPoint {
    pub k: u32,
    pub r: u32,
    pub a: u64,
}

impl SpecPoint {
    pub fn new(k: u32, r: u32, a: u64, p: u64) -> Result<Self, LambdaError> {
        if k < 1 {
            return Err(LambdaError::BadSpecPoint("weight must be at least 1".into()));
        }
        if r > 0 && a.is_multiple_of(p) {
            return Err(LambdaError::BadSpecPoint(format!(
                "exponent {a} is divisible by p; ζ would not be primitive of level {r}"
            )));
        }
        let a = if r == 0 { 0 } else { a % p.pow(r) };
        Ok(SpecPoint { k, r, a })
    }

    /// The evaluation point `t` in Z_p[ζ_{p^r}].
    pub fn point(&self, p: u64, prec: i64) -> PadicCyclo {
        let zeta = PadicCyclo::zeta(p, self.r, self.a as i64, prec);
        let w = PadicNum::from_int(p, 1 + p as i64, prec).pow(self.k as u64 - 1);
        zeta.scale(&w).sub_ref(&PadicCyclo::one(p, self.r, prec))
    }
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} zeta={}:{}", self.k, self.r, self.a)
    }
}

impl FromStr for SpecPoint {
    type Err = LambdaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LambdaError::Parse(format!("expected `k=<int> zeta=<r>:<a>`, got {s:?}"));
        let mut k = None;
        let mut z = None;
        for tok in s.split_whitespace() {
            if let Some(v) = tok.strip_prefix("k=") {
                k = Some(v.parse::<u32>().map_err(|_| bad())?);
            } else if let Some(v) = tok.strip_prefix("zeta=") {
                let (r, a) = v.split_once(':').ok_or_else(bad)?;
                z = Some((r.parse::<u32>().map_err(|_| bad())?, a.parse::<u64>().map_err(|_| bad())?));
            } else {
                return Err(bad());
            }
        }
        let (r, a) = z.ok_or_else(bad)?;
        Ok(SpecPoint { k: k.ok_or_else(bad)?, r, a })
    }
}

/// A value `F(t)` together with the bound `L·ord(t)` on the discarded tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: PadicCyclo,
    pub tail_bound: Valuation,
}

/// Horner evaluation of the truncation at `t` with `ord(t) > 0`.
///
/// Terms beyond the truncation have valuation at least `L·ord(t)`, which
/// forces every coordinate of the tail to vanish modulo `p^⌊L·ord(t)⌋`; the
/// returned value is truncated to that precision.
pub fn eval_small(series: &LambdaSeries, t: &PadicCyclo) -> Result<Evaluation, LambdaError> {
    let p = series.p();
    let level = t.level();
    let prec = series.prec().min(t.abs_prec());
    let ord_t = t.ord();
    let tail_bound = match ord_t {
        Valuation::Finite(v) if v <= Ratio::from_integer(0) => return Err(LambdaError::NotInMaximalIdeal),
        Valuation::Finite(v) => Valuation::Finite(v * series.len() as i64),
        inf => inf,
    };
    let cap = match tail_bound {
        Valuation::Finite(b) => b.floor().to_integer().min(prec),
        Valuation::Infinite { .. } => prec,
    };
    let mut acc = PadicCyclo::zero(p, level, prec);
    for c in series.coeffs().iter().rev() {
        acc = acc.mul_ref(t).add_ref(&PadicCyclo::from_padic(c, level));
    }
    Ok(Evaluation { value: acc.truncate(cap), tail_bound })
}

/// `F(P_{k,ζ})`, i.e. evaluation at `t = ζ(1+p)^{k−1} − 1`.
pub fn specialize(series: &LambdaSeries, point: &SpecPoint) -> Result<Evaluation, LambdaError> {
    let t = point.point(series.p(), series.prec());
    eval_small(series, &t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn one_plus_t_at_zeta_minus_one() {
        let f = LambdaSeries::from_ints(3, 30, &[1, 1], 16);
        let t = PadicCyclo::zeta(3, 1, 1, 30).sub_ref(&PadicCyclo::one(3, 1, 30));
        let e = eval_small(&f, &t).unwrap();
        assert_eq!(e.value, PadicCyclo::zeta(3, 1, 1, 8));
        assert_eq!(e.tail_bound, Valuation::int(8));
    }

    #[test]
    fn valuation_of_p_times_quadratic() {
        // p(T² + p) at ζ_9 − 1 has valuation 1 + 2/6.
        let f = LambdaSeries::from_ints(3, 30, &[9, 0, 3], 64);
        let t = PadicCyclo::zeta(3, 2, 1, 30).sub_ref(&PadicCyclo::one(3, 2, 30));
        let e = eval_small(&f, &t).unwrap();
        assert_eq!(e.value.ord(), Valuation::frac(4, 3));
    }

    #[test]
    fn zero_series_and_unit_point() {
        let z = LambdaSeries::zero(5, 20, 8);
        let t = PadicCyclo::zeta(5, 1, 1, 20).sub_ref(&PadicCyclo::one(5, 1, 20));
        assert!(eval_small(&z, &t).unwrap().value.is_zero());
        let u = PadicCyclo::one(5, 1, 20);
        assert_eq!(eval_small(&z, &u), Err(LambdaError::NotInMaximalIdeal));
    }

    #[test]
    fn cube_at_weight_one_and_two() {
        let f = LambdaSeries::binomial_int(5, &BigInt::from(3), 64, 30);
        let pt = SpecPoint::new(1, 2, 7, 5).unwrap();
        let v = specialize(&f, &pt).unwrap().value;
        assert_eq!(v, PadicCyclo::zeta(5, 2, 21, v.abs_prec()));
        let pt2 = SpecPoint::new(3, 0, 0, 5).unwrap();
        let v2 = specialize(&f, &pt2).unwrap().value;
        let expect = PadicNum::from_int(5, 6, 30).pow(6);
        assert!(v2.coords()[0].congruent(&expect));
    }

    #[test]
    fn spec_point_text() {
        let pt: SpecPoint = "k=2 zeta=3:4".parse().unwrap();
        assert_eq!(pt, SpecPoint { k: 2, r: 3, a: 4 });
        assert_eq!(pt.to_string(), "k=2 zeta=3:4");
        assert!(SpecPoint::new(1, 1, 3, 3).is_err());
    }
}
