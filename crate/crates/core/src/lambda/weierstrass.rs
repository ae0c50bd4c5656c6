use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{LambdaError, LambdaSeries};
use crate::padic::{big_pow, PadicNum};

/// `F = p^k · f · u` with `f` distinguished and `u` a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassData {
    pub k: u32,
    /// Coefficients of `f`, constant term first; the last entry is 1.
    pub f: Vec<PadicNum>,
    pub u: LambdaSeries,
}

impl WeierstrassData {
    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    /// `p^k · f · u` truncated to the length of `u`.
    pub fn reconstruct(&self) -> LambdaSeries {
        let p = self.u.p();
        let len = self.u.len();
        let mut fs = self.f.clone();
        fs.resize(len.max(fs.len()), PadicNum::zero(p, self.u.prec()));
        fs.truncate(len);
        let f_series = LambdaSeries::new(p, self.u.prec(), fs);
        let pk = PadicNum::one(p, self.u.prec() + self.k as i64 + 1).shift_by(self.k as i64);
        f_series.mul_ref(&self.u).scale(&pk)
    }

    /// `f` with signed decimal coefficients, highest degree first, e.g. `T + 5`.
    pub fn f_string(&self) -> String {
        poly_string(&self.f)
    }
}

pub(crate) fn signed_rep(c: &PadicNum) -> BigInt {
    let n = c.to_bigint().unwrap_or_default();
    let m = big_pow(c.p(), c.abs_prec().max(0) as u32);
    if &n * 2 > m {
        n - m
    } else {
        n
    }
}

pub(crate) fn poly_string(coeffs: &[PadicNum]) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        let v = signed_rep(c);
        if v.is_zero() {
            continue;
        }
        let neg = v < BigInt::zero();
        let mag = if neg { -v } else { v };
        let mono = match i {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{i}"),
        };
        let body = if i == 0 {
            mag.to_string()
        } else if mag == BigInt::from(1) {
            mono
        } else {
            format!("{mag}·{mono}")
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for WeierstrassData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "f = {}", self.f_string())?;
        let head: Vec<PadicNum> = self.u.coeffs().iter().take(6).cloned().collect();
        write!(f, "u = {} + …", poly_string(&head))
    }
}

/// Weierstrass preparation of a truncated series.
///
/// The `L` retained coefficients are read as a polynomial `G = F / p^k` and
/// factored as `f · h` by Hensel lifting from `G ≡ T^d · ū (mod p)`; `u = h`.
/// The factors are exact modulo `p^(N - k)`, so `p^k f u` reproduces `F`
/// modulo `p^N`.
pub fn weierstrass_prep(series: &LambdaSeries) -> Result<WeierstrassData, LambdaError> {
    let p = series.p();
    let len = series.len();
    let prec = series.prec();
    let mut k: Option<i64> = None;
    for c in series.coeffs() {
        if c.is_zero() {
            continue;
        }
        if c.shift() < 0 {
            return Err(LambdaError::NotIntegral);
        }
        k = Some(k.map_or(c.shift(), |m: i64| m.min(c.shift())));
    }
    let k = k.ok_or(LambdaError::ZeroSeries)?;
    let work = prec - k;
    let modulus = big_pow(p, work as u32);
    let pk = big_pow(p, k as u32);
    let g: Vec<BigInt> = series.coeffs().iter().map(|c| (c.to_bigint().unwrap() / &pk).mod_floor(&modulus)).collect();
    let pb = BigInt::from(p);
    let d = g.iter().position(|c| !c.mod_floor(&pb).is_zero()).ok_or(LambdaError::TruncationTooShort(len))?;

    let small = |x: &BigInt| x.mod_floor(&pb).to_u64().unwrap();
    let ubar: Vec<u64> = g[d..].iter().map(small).collect();
    let vinv = series_inverse_mod_p(&ubar, d, p);

    let mut f_low: Vec<BigInt> = vec![BigInt::zero(); d];
    let mut h: Vec<BigInt> = g[d..].iter().map(|c| c.mod_floor(&pb)).collect();
    let mut pj = pb.clone();
    for _ in 1..work {
        let next = &pj * &pb;
        let prod = product(&f_low, &h, d, len);
        let e: Vec<u64> = g
            .iter()
            .zip(&prod)
            .map(|(gi, fi)| {
                let r = (gi - fi).mod_floor(&next);
                debug_assert!((&r % &pj).is_zero());
                (r / &pj).to_u64().unwrap()
            })
            .collect();
        if e.iter().all(|&x| x == 0) {
            pj = next;
            continue;
        }
        // a = ū^{-1} e mod T^d, b = (e - a ū) / T^d, both over F_p.
        let mut a = vec![0u64; d];
        for i in 0..d {
            let mut s = 0u64;
            for j in 0..=i {
                s = (s + vinv[j] * e[i - j]) % p;
            }
            a[i] = s;
        }
        let mut c = e.clone();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &uj) in ubar.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] = (c[i + j] + p * p - ai * uj % p) % p;
            }
        }
        debug_assert!(c[..d].iter().all(|&x| x == 0));
        for (i, ai) in a.iter().enumerate() {
            f_low[i] = (&f_low[i] + &pj * BigInt::from(*ai)).mod_floor(&modulus);
        }
        for (i, hi) in h.iter_mut().enumerate() {
            *hi = (&*hi + &pj * BigInt::from(c[d + i])).mod_floor(&modulus);
        }
        pj = next;
    }

    let mut f: Vec<PadicNum> = f_low.into_iter().map(|c| PadicNum::from_int(p, c, work)).collect();
    f.push(PadicNum::one(p, work));
    let mut u: Vec<PadicNum> = h.into_iter().map(|c| PadicNum::from_int(p, c, work)).collect();
    u.resize(len, PadicNum::zero(p, work));
    Ok(WeierstrassData { k: k as u32, f, u: LambdaSeries::new(p, work, u) })
}

/// `(T^d + f_low) · h`, truncated to `len` coefficients.
fn product(f_low: &[BigInt], h: &[BigInt], d: usize, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (j, hj) in h.iter().enumerate() {
        if d + j < len {
            out[d + j] += hj;
        }
    }
    for (i, fi) in f_low.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, hj) in h.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += fi * hj;
        }
    }
    out
}

/// First `n` coefficients of `1/u` over F_p (`u[0]` nonzero).
fn series_inverse_mod_p(u: &[u64], n: usize, p: u64) -> Vec<u64> {
    let inv0 = crate::arith::mod_inv(u[0] as i64, p as i64).unwrap() as u64;
    let mut v = vec![0u64; n];
    for i in 0..n {
        let mut s = if i == 0 { 1 } else { 0 };
        for j in 1..=i.min(u.len().saturating_sub(1)) {
            s = (s + p * p - u[j] * v[i - j] % p) % p;
        }
        v[i] = s * inv0 % p;
    }
    v
}

/// Upper bound for the number of zeros in the open unit disc: `deg f`.
pub fn root_bound(series: &LambdaSeries) -> Result<usize, LambdaError> {
    Ok(weierstrass_prep(series)?.degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_distinguished() {
        let f = LambdaSeries::from_ints(5, 20, &[5, 1], 8);
        let w = weierstrass_prep(&f).unwrap();
        assert_eq!(w.k, 0);
        assert_eq!(w.f_string(), "T + 5");
        assert_eq!(w.u, LambdaSeries::one(5, 20, 8));
    }

    #[test]
    fn unit_times_p() {
        let f = LambdaSeries::from_ints(5, 20, &[5, 5], 8);
        let w = weierstrass_prep(&f).unwrap();
        assert_eq!(w.k, 1);
        assert_eq!(w.f_string(), "1");
        assert_eq!(w.u, LambdaSeries::from_ints(5, 19, &[1, 1], 8));
        assert_eq!(w.reconstruct(), f);
    }

    #[test]
    fn factor_product() {
        // T² + (1+p)T + p = (T + p)(1 + T)
        let f = LambdaSeries::from_ints(3, 30, &[3, 4, 1], 10);
        let w = weierstrass_prep(&f).unwrap();
        assert_eq!(w.k, 0);
        assert_eq!(w.f_string(), "T + 3");
        assert_eq!(w.u, LambdaSeries::from_ints(3, 30, &[1, 1], 10));
        assert_eq!(root_bound(&f).unwrap(), 1);
    }

    #[test]
    fn root_bounds() {
        assert_eq!(root_bound(&LambdaSeries::from_ints(5, 20, &[5], 8)).unwrap(), 0);
        assert_eq!(root_bound(&LambdaSeries::from_ints(5, 20, &[5, 5, 1], 8)).unwrap(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(weierstrass_prep(&LambdaSeries::zero(3, 10, 5)), Err(LambdaError::ZeroSeries));
    }

    #[test]
    fn non_polynomial_unit() {
        let f = LambdaSeries::from_ints(3, 25, &[3, 6, 2, 5, 1, 7, 9, 2, 2, 4, 1, 1], 12);
        let w = weierstrass_prep(&f).unwrap();
        assert_eq!(w.degree(), 2);
        assert_eq!(w.reconstruct(), f);
        assert!(w.f[..2].iter().all(|c| c.shift() >= 1));
    }
}
