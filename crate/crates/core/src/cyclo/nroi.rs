use std::collections::{HashMap, HashSet};

use super::elem::CycloInt;
use super::CycloError;
use crate::arith::lcm;

/// Largest term count accepted by [`n_roi`].
pub const MAX_NROI_CAP: usize = 8;

/// Default constant `c` in [`loxton_bound`].
pub const DEFAULT_LOXTON_C: f64 = 0.01;

/// Default exponent constant `d` in [`loxton_bound`].
pub const DEFAULT_LOXTON_D: f64 = 1.0;

/// Sets `S_0, …, S_h` where `S_i` holds every sum of exactly `i` elements of
/// μ_M, written in Q(ζ_n).
fn levels(n: u64, m: u64, h: usize) -> Vec<HashSet<CycloInt>> {
    let roots: Vec<CycloInt> = (0..m).map(|j| CycloInt::root(m, j as i64).embed(n).expect("m divides n")).collect();
    let mut out = vec![HashSet::from([CycloInt::zero(n)])];
    for _ in 0..h {
        let prev = out.last().unwrap();
        let next: HashSet<CycloInt> = prev.iter().flat_map(|s| roots.iter().map(move |r| s.add_ref(r))).collect();
        out.push(next);
    }
    out
}

/// The least number of elements of μ_M whose sum is `α`, searching up to
/// `cap` terms.
///
/// This bounds N(α) from above; it is exact whenever some optimal
/// representation uses only M-th roots of unity.
pub fn n_roi(alpha: &CycloInt, search_conductor: u64, cap: usize) -> Result<usize, CycloError> {
    if cap > MAX_NROI_CAP {
        return Err(CycloError::DomainError(format!("search cap {cap} exceeds {MAX_NROI_CAP}")));
    }
    if search_conductor == 0 {
        return Err(CycloError::DomainError("search conductor must be positive".into()));
    }
    if alpha.is_zero() {
        return Ok(0);
    }
    let n = lcm(alpha.conductor(), search_conductor);
    let target = alpha.embed(n)?;
    let half = cap.div_ceil(2);
    let sets = levels(n, search_conductor, half);
    for t in 1..=cap {
        let a = t.div_ceil(2);
        let b = t - a;
        if sets[a].iter().any(|s| sets[b].contains(&target.sub_ref(s))) {
            return Ok(t);
        }
    }
    Err(CycloError::NotFound { cap })
}

/// Every sum of at most `cap` elements of μ_M, keyed to its least term count.
pub fn sum_table(search_conductor: u64, cap: usize) -> HashMap<CycloInt, usize> {
    let mut table = HashMap::new();
    for (i, set) in levels(search_conductor, search_conductor, cap).into_iter().enumerate() {
        for s in set {
            table.entry(s).or_insert(i);
        }
    }
    table
}

/// `c·n·exp(−d·ln n / ln ln n)`, the lower bound for the squared house of a
/// cyclotomic integer that needs `n` roots of unity.
pub fn loxton_bound(n: u64, c: f64, d: f64) -> Result<f64, CycloError> {
    if n < 3 {
        return Err(CycloError::DomainError(format!("n = {n} < 3")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(CycloError::DomainError(format!("c = {c} must be positive")));
    }
    if !(d > std::f64::consts::LN_2 && d.is_finite()) {
        return Err(CycloError::DomainError(format!("d = {d} must exceed ln 2")));
    }
    let x = n as f64;
    Ok(c * x * (-d * x.ln() / x.ln().ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(n_roi(&CycloInt::zero(3), 3, 4), Ok(0));
        let a = CycloInt::root(3, 2).neg_ref();
        assert_eq!(n_roi(&a, 6, 4), Ok(1));
        assert_eq!(n_roi(&CycloInt::from_int(1, 2), 12, 4), Ok(2));
        assert_eq!(n_roi(&CycloInt::from_int(1, 5), 3, 2), Err(CycloError::NotFound { cap: 2 }));
        assert!(n_roi(&CycloInt::one(1), 3, 9).is_err());
    }

    #[test]
    fn zero_from_cancellation() {
        // 1 + ζ_3 + ζ_3² = 0 also needs zero terms.
        let s = CycloInt::one(3).add_ref(&CycloInt::root(3, 1)).add_ref(&CycloInt::root(3, 2));
        assert!(s.is_zero());
        assert_eq!(n_roi(&s, 3, 3), Ok(0));
        // −1 = ζ_3 + ζ_3² needs two cube roots, one sixth root.
        let m1 = CycloInt::from_int(3, -1);
        assert_eq!(n_roi(&m1, 3, 3), Ok(2));
        assert_eq!(n_roi(&m1, 6, 3), Ok(1));
    }

    #[test]
    fn table_agrees_with_search() {
        let table = sum_table(5, 3);
        for (x, &k) in &table {
            assert_eq!(n_roi(x, 5, 3), Ok(k));
        }
    }

    #[test]
    fn loxton_values() {
        let v = loxton_bound(10, 1.0, 1.0).unwrap();
        let oracle = 10.0 * (-(10f64.ln()) / 10f64.ln().ln()).exp();
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 0.632).abs() < 0.01);
        assert!(loxton_bound(2, 1.0, 1.0).is_err());
        assert!(loxton_bound(10, 1.0, 0.5).is_err());
        let a = loxton_bound(40, 0.3, 1.2).unwrap();
        let b = loxton_bound(40, 0.6, 1.2).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12);
    }
}
