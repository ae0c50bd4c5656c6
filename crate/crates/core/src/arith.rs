//! Small machine-integer number theory shared by the other modules.

use num_integer::Integer;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn radical(n: u64) -> u64 {
    factor(n).iter().map(|&(p, _)| p).product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

pub fn moebius(n: u64) -> i64 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    let m128 = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let g = a.rem_euclid(m).extended_gcd(&m);
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m))
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    k
}

/// Smallest generator of (Z/p)^x for an odd prime p.
pub fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let qs: Vec<u64> = factor(phi).into_iter().map(|(q, _)| q).collect();
    (2..p).find(|&g| qs.iter().all(|&q| mod_pow(g, phi / q, p) != 1)).unwrap_or(1)
}

/// Kronecker symbol (a / n) for n > 0.
pub fn kronecker(a: i64, n: u64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i64;
    while n.is_multiple_of(2) {
        n /= 2;
        let r = a.rem_euclid(8);
        if r % 2 == 0 {
            return 0;
        }
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    // Jacobi symbol (a / n), n odd.
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Integer power with overflow panic (used only for small exponents).
pub fn ipow(base: i64, exp: u32) -> i64 {
    base.checked_pow(exp).expect("integer power overflow")
}

/// Solve x = a mod m, x = b mod n for coprime m, n.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    let inv = mod_inv(m as i64, n as i64).expect("crt moduli must be coprime") as i128;
    let diff = (b as i128 - a as i128).rem_euclid(n as i128);
    let t = diff * inv % n as i128;
    (a as i128 + m as i128 * t).rem_euclid((m * n) as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_and_factor() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(1500), 400);
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(radical(72), 6);
    }

    #[test]
    fn kronecker_small() {
        // -4 is a square mod primes = 1 mod 4
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-8, 3), 1);
        assert_eq!(kronecker(-3, 7), 1);
        assert_eq!(kronecker(-3, 5), -1);
    }

    #[test]
    fn roots_and_orders() {
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(mult_order(2, 5), 4);
        assert_eq!(crt(2, 3, 3, 5), 8);
        assert_eq!(mod_inv(3, 7), Some(5));
    }
}
