//! Digit-string rendering: `…(2031)_5 + O(5^40)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{big_pow, PadicError, PadicNum};

fn digits_of(mut n: BigInt, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    while !n.is_zero() {
        let (q, r) = n.div_rem(&pb);
        out.push(r.to_u64().unwrap());
        n = q;
    }
    out.reverse();
    out
}

fn join(digits: &[u64]) -> Vec<String> {
    digits.iter().map(|d| d.to_string()).collect()
}

pub fn render(x: &PadicNum) -> String {
    let p = x.p();
    let sep = if p > 10 { "," } else { "" };
    let body = if x.is_zero() {
        "0".to_string()
    } else if x.shift() >= 0 {
        join(&digits_of(x.to_bigint().unwrap(), p)).join(sep)
    } else {
        let frac = (-x.shift()) as usize;
        let mut ds = digits_of(x.unit().clone(), p);
        while ds.len() <= frac {
            ds.insert(0, 0);
        }
        let parts = join(&ds);
        let cut = parts.len() - frac;
        format!("{}.{}", parts[..cut].join(sep), parts[cut..].join(sep))
    };
    format!("…({body})_{p} + O({p}^{})", x.abs_prec())
}

fn bad(s: &str) -> PadicError {
    PadicError::Parse(format!("malformed p-adic literal: {s:?}"))
}

pub fn parse(s: &str) -> Result<PadicNum, PadicError> {
    let t = s.trim();
    let rest = t.strip_prefix("…(").or_else(|| t.strip_prefix("...(")).ok_or_else(|| bad(s))?;
    let (body, tail) = rest.split_once(")_").ok_or_else(|| bad(s))?;
    let (p_str, o_part) = tail.split_once('+').ok_or_else(|| bad(s))?;
    let p: u64 = p_str.trim().parse().map_err(|_| bad(s))?;
    super::check_prime(p)?;
    let o = o_part.trim();
    let inner = o.strip_prefix("O(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| bad(s))?;
    let (bp, n_str) = inner.split_once('^').ok_or_else(|| bad(s))?;
    if bp.trim().parse::<u64>().map_err(|_| bad(s))? != p {
        return Err(PadicError::Parse(format!("prime mismatch in {s:?}")));
    }
    let abs: i64 = n_str.trim().parse().map_err(|_| bad(s))?;
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    let read = |chunk: &str| -> Result<Vec<u64>, PadicError> {
        if chunk.is_empty() {
            return Ok(Vec::new());
        }
        let ds: Vec<u64> = if p > 10 || chunk.contains(',') {
            chunk.split(',').map(|d| d.trim().parse::<u64>().map_err(|_| bad(s))).collect::<Result<_, _>>()?
        } else {
            chunk.chars().map(|c| c.to_digit(10).map(u64::from).ok_or_else(|| bad(s))).collect::<Result<_, _>>()?
        };
        if ds.iter().any(|&d| d >= p) {
            return Err(PadicError::Parse(format!("digit out of range in {s:?}")));
        }
        Ok(ds)
    };
    let mut digits = read(int_part)?;
    let frac = read(frac_part)?;
    let scale = frac.len() as u32;
    digits.extend(frac);
    let n = digits.iter().fold(BigInt::zero(), |acc, &d| acc * BigInt::from(p) + BigInt::from(d));
    let r = BigRational::new(n, big_pow(p, scale));
    Ok(PadicNum::from_rational(p, &r, abs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_base_p_digits() {
        let x = PadicNum::from_int(5, 266, 40);
        assert_eq!(render(&x), "…(2031)_5 + O(5^40)");
        assert_eq!(parse("…(2031)_5 + O(5^40)").unwrap(), x);
        assert_eq!(parse("...(2031)_5 + O(5^40)").unwrap(), x);
    }

    #[test]
    fn fractional_and_large_primes() {
        let x = PadicNum::from_ratio(5, 7, 25, 10);
        let s = render(&x);
        assert_eq!(s, "…(0.12)_5 + O(5^10)");
        assert_eq!(parse(&s).unwrap(), x);
        let y = PadicNum::from_int(13, 13 * 13 + 12, 8);
        assert_eq!(render(&y), "…(1,0,12)_13 + O(13^8)");
        assert_eq!(parse(&render(&y)).unwrap(), y);
    }

    #[test]
    fn zero_and_errors() {
        let z = PadicNum::zero(3, 7);
        assert_eq!(render(&z), "…(0)_3 + O(3^7)");
        assert_eq!(parse(&render(&z)).unwrap(), z);
        assert!(parse("(12)_5").is_err());
        assert!(parse("…(17)_5 + O(5^4)").is_err());
        assert!(parse("…(1)_4 + O(4^4)").is_err());
    }
}
