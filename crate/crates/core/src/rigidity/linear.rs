use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::RigidityError;
use crate::arith::lcm;
use crate::cyclo::{CycloInt, CycloNum, Field, QuadCycloNum, RootOfUnity};
use crate::padic::PadicNum;

/// Determinant by cofactor expansion over column subsets, using ring
/// operations only (no division).
pub fn determinant<F: Field>(m: &[Vec<F>]) -> Option<F> {
    let n = m.len();
    let proto = m.first()?.first()?.clone();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    assert!(n < usize::BITS as usize);
    // minors[S] = det of rows 0..|S| and the columns in S.
    let mut minors: Vec<Option<F>> = vec![None; 1 << n];
    minors[0] = Some(proto.one_like());
    for s in 1usize..(1 << n) {
        let k = s.count_ones() as usize;
        let row = &m[k - 1];
        let mut acc = proto.zero_like();
        for (pos, j) in (0..n).filter(|j| s >> j & 1 == 1).enumerate() {
            let sub = minors[s & !(1 << j)].as_ref().unwrap();
            let term = row[j].mul(sub);
            acc = if (pos + k - 1).is_multiple_of(2) { acc.add(&term) } else { acc.sub(&term) };
        }
        minors[s] = Some(acc);
    }
    minors.pop().unwrap()
}

fn residue(e: &PadicNum, modulus: u64) -> Result<u64, RigidityError> {
    let v = e.to_bigint().ok_or_else(|| RigidityError::DegenerateInput("exponent is not a p-adic integer".into()))?;
    Ok((v % BigInt::from(modulus)).to_u64().unwrap())
}

fn power(z: &RootOfUnity, e: &PadicNum) -> Result<CycloNum, RigidityError> {
    let q = z.order();
    let r = residue(e, q)?;
    Ok(z.pow(r as i64).to_cyclo())
}

/// Chosen roots of unity and the exactly computed determinant of `d_i ζ_j^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeSelection {
    pub roots: Vec<RootOfUnity>,
    pub det: CycloNum,
}

/// Pick distinct p-power roots of unity `ζ_1 = 1, ζ_2, …` so that the matrix
/// `d_i ζ_j^{e_i}` is invertible, one column at a time.
///
/// At step `m+1` the determinant, as a function of the new root `X`, is a
/// polynomial with exponents `ẽ_i < p^k` that are distinct, so some element
/// of μ_{p^k} is not a root.
pub fn vandermonde_select(p: u64, d: &[CycloInt], e: &[PadicNum]) -> Result<VandermondeSelection, RigidityError> {
    if d.len() != e.len() || d.is_empty() {
        return Err(RigidityError::DegenerateInput("need equally many coefficients and exponents".into()));
    }
    if d.iter().any(CycloInt::is_zero) {
        return Err(RigidityError::DegenerateInput("zero coefficient".into()));
    }
    let max_k = e.iter().map(|x| x.abs_prec()).min().unwrap().max(0) as u32;
    let d: Vec<CycloNum> = d.iter().map(CycloInt::to_num).collect();
    let mut roots = vec![RootOfUnity::one()];
    for m in 1..d.len() {
        let need = roots.iter().map(|z| z.order()).max().unwrap();
        let k = (0..=max_k)
            .find(|&k| {
                let q = p.pow(k);
                q % need == 0 && {
                    let mut rs: Vec<u64> = e[..=m].iter().map(|x| residue(x, q).unwrap_or(0)).collect();
                    rs.sort_unstable();
                    rs.windows(2).all(|w| w[0] != w[1])
                }
            })
            .ok_or_else(|| RigidityError::DegenerateInput("exponents collide at every available modulus".into()))?;
        let q = p.pow(k);
        // Cofactors of the entries d_i X^{ẽ_i} in the last column.
        let mut cofactors = Vec::with_capacity(m + 1);
        for i in 0..=m {
            let rows: Vec<Vec<CycloNum>> = (0..=m)
                .filter(|&r| r != i)
                .map(|r| {
                    roots.iter().map(|z| Ok(d[r].mul_ref(&power(z, &e[r])?))).collect::<Result<Vec<_>, RigidityError>>()
                })
                .collect::<Result<_, _>>()?;
            let minor = if rows.is_empty() { CycloNum::one(1) } else { determinant(&rows).unwrap() };
            let c = d[i].mul_ref(&minor);
            cofactors.push(if (i + m) % 2 == 0 { c } else { c.neg_ref() });
        }
        let exps: Vec<u64> = e[..=m].iter().map(|x| residue(x, q)).collect::<Result<_, _>>()?;
        let choice = (0..q)
            .map(|a| RootOfUnity::new(q, a as i64))
            .find(|z| {
                let val = cofactors
                    .iter()
                    .zip(&exps)
                    .fold(CycloNum::zero(1), |acc, (c, &x)| acc.add_ref(&c.mul_ref(&z.pow(x as i64).to_cyclo())));
                !val.is_zero()
            })
            .ok_or(RigidityError::SingularSystem)?;
        roots.push(choice.reduced());
    }
    let det = selection_matrix(&d, e, &roots).and_then(|mat| determinant(&mat).ok_or(RigidityError::SingularSystem))?;
    if det.is_zero() {
        return Err(RigidityError::SingularSystem);
    }
    Ok(VandermondeSelection { roots, det })
}

/// `x_{j,i} = d_i ζ_j^{e_i}` with rows indexed by roots.
fn selection_matrix(
    d: &[CycloNum],
    e: &[PadicNum],
    roots: &[RootOfUnity],
) -> Result<Vec<Vec<CycloNum>>, RigidityError> {
    roots.iter().map(|z| d.iter().zip(e).map(|(di, ei)| Ok(di.mul_ref(&power(z, ei)?))).collect()).collect()
}

/// Solve `A x = b` by Cramer's rule: each `x_i` is a ratio of determinants,
/// with a single field inversion.
pub fn cramer_solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Result<Vec<F>, RigidityError> {
    let n = a.len();
    if n == 0 || b.len() != n {
        return Err(RigidityError::DegenerateInput("system shape mismatch".into()));
    }
    let det = determinant(a).ok_or(RigidityError::SingularSystem)?;
    if det.is_zero() {
        return Err(RigidityError::SingularSystem);
    }
    let inv = det.inv().ok_or(RigidityError::SingularSystem)?;
    (0..n)
        .map(|i| {
            let ai: Vec<Vec<F>> = a
                .iter()
                .zip(b)
                .map(|(row, bj)| {
                    let mut r = row.clone();
                    r[i] = bj.clone();
                    r
                })
                .collect();
            Ok(determinant(&ai).unwrap().mul(&inv))
        })
        .collect()
}

/// Recover `x_i = π_i^{k−1}` from `F(P_{k,ζ_j}) = Σ_i d_i ζ_j^{e_i} x_i`.
///
/// Only the matrix field Q(ζ_N) of the `d_i ζ_j^{e_i}` is inverted in: each
/// `x_i = Σ_j C_{ji} b_j / det` with cofactors `C_{ji}` in Q(ζ_N), applied to
/// the `a` and `b` parts of the samples `a + b√−d` separately. Both parts of
/// each solution are returned in their smallest cyclotomic field.
pub fn cramer_recover(
    d: &[CycloInt],
    e: &[PadicNum],
    k: u32,
    samples: &[(RootOfUnity, QuadCycloNum)],
) -> Result<Vec<QuadCycloNum>, RigidityError> {
    if k < 2 {
        return Err(RigidityError::DegenerateInput("weight must be at least 2".into()));
    }
    if samples.len() != d.len() || d.len() != e.len() || d.is_empty() {
        return Err(RigidityError::DegenerateInput("need one sample per term".into()));
    }
    let qd = samples[0].1.d();
    if samples.iter().any(|(_, s)| s.d() != qd) {
        return Err(RigidityError::DegenerateInput("samples live in different quadratic fields".into()));
    }
    let d: Vec<CycloNum> = d.iter().map(CycloInt::to_num).collect();
    let roots: Vec<RootOfUnity> = samples.iter().map(|(z, _)| *z).collect();
    let a = selection_matrix(&d, e, &roots)?;
    let big_n = a.iter().flatten().fold(1, |acc, x| lcm(acc, x.conductor()));
    let a: Vec<Vec<CycloNum>> = a
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.embed(big_n)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let n = a.len();
    let det = determinant(&a).ok_or(RigidityError::SingularSystem)?;
    let inv = det.inverse().ok_or(RigidityError::SingularSystem)?;
    let x: Vec<QuadCycloNum> = (0..n)
        .map(|i| {
            (0..n).fold(QuadCycloNum::zero(1, qd), |acc, j| {
                let c = cofactor(&a, j, i).mul_ref(&inv);
                acc.add_ref(&samples[j].1.scale(&c))
            })
        })
        .collect();
    for (row, (_, bj)) in a.iter().zip(samples) {
        let lhs = row.iter().zip(&x).fold(QuadCycloNum::zero(1, qd), |acc, (aij, xi)| acc.add_ref(&xi.scale(aij)));
        if !lhs.a().value_eq(bj.a()) || !lhs.b().value_eq(bj.b()) {
            return Err(RigidityError::SingularSystem);
        }
    }
    x.into_iter()
        .map(|xi| {
            let (ra, rb) = (xi.a().normalize_conductor(), xi.b().normalize_conductor());
            let m = lcm(ra.conductor(), rb.conductor());
            Ok(QuadCycloNum::new(m, qd, ra, rb)?)
        })
        .collect()
}

/// `(−1)^{j+i}` times the minor of `a` without row `j` and column `i`.
fn cofactor(a: &[Vec<CycloNum>], j: usize, i: usize) -> CycloNum {
    let rows: Vec<Vec<CycloNum>> = a
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != j)
        .map(|(_, row)| row.iter().enumerate().filter(|&(c, _)| c != i).map(|(_, x)| x.clone()).collect())
        .collect();
    let minor = determinant(&rows).unwrap_or_else(|| CycloNum::one(a[0][0].conductor()));
    if (i + j).is_multiple_of(2) {
        minor
    } else {
        minor.neg_ref()
    }
}
