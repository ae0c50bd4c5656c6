use std::collections::BTreeMap;
use std::fmt;

use super::{ExponentialForm, RigidityError, SampleSet};
use crate::cyclo::{CycloInt, RootOfUnity};
use crate::padic::PadicNum;

/// `value(ζ) = ξ'·ζ^e` with `e` known modulo `p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleFit {
    pub xi: RootOfUnity,
    pub e: PadicNum,
}

/// Fit samples that are all roots of unity to `ξ'(1+T)^e`.
pub fn fit_single(s: &SampleSet) -> Result<SingleFit, RigidityError> {
    let p = s.p();
    let n = s.level();
    let q = p.pow(n);
    let xi = RootOfUnity::recognize(s.value(0)).ok_or(RigidityError::NotMonomial(0))?;
    let e = if q == 1 {
        0
    } else {
        let rho = RootOfUnity::recognize(s.value(1)).ok_or(RigidityError::NotMonomial(1))?;
        let ratio = rho.mul(&xi.pow(-1));
        if !q.is_multiple_of(ratio.order()) {
            return Err(RigidityError::NotMonomial(1));
        }
        ratio.exponent() * (q / ratio.modulus())
    };
    let base = xi.to_cyclo::<i64>();
    for a in 0..q {
        let expect = base.mul_ref(&CycloInt::root(q, ((a as u128 * e as u128) % q as u128) as i64));
        if !expect.value_eq(s.value(a)) {
            if RootOfUnity::recognize(s.value(a)).is_none() {
                return Err(RigidityError::NotMonomial(a));
            }
            return Err(RigidityError::Inconsistent(format!("value at exponent {a} is not ξ'·ζ^{{{a}·{e}}}")));
        }
    }
    Ok(SingleFit { xi, e: PadicNum::from_int(p, e as i64, n as i64) })
}

/// Nonzero `ĉ_r = p^{−n} Σ_a value(ζ^a) ζ^{−ar}` for `r` mod `p^n`.
pub(crate) fn fourier(s: &SampleSet) -> Result<Vec<(u64, CycloInt)>, RigidityError> {
    let q = s.p().pow(s.level());
    let big_n = s.conductor();
    let step = big_n / q;
    let sparse: Vec<Vec<(usize, i64)>> = s
        .values()
        .iter()
        .map(|v| Ok(v.embed(big_n)?.redundant().into_iter().enumerate().filter(|(_, c)| *c != 0).collect()))
        .collect::<Result<_, RigidityError>>()?;
    let len = big_n as usize;
    let mut out = Vec::new();
    for r in 0..q {
        let mut acc = vec![0i64; len];
        for (a, terms) in sparse.iter().enumerate() {
            let ar = (a as u64 * r) % q;
            let shift = (((q - ar) % q) * step) as usize;
            for &(j, c) in terms {
                let k = (j + shift) % len;
                acc[k] = acc[k].checked_add(c).expect("Fourier sum overflow");
            }
        }
        let c = CycloInt::from_poly(big_n, acc);
        if c.coeffs().iter().any(|x| x % q as i64 != 0) {
            return Err(RigidityError::NotDivisible { level: s.level(), residue: r });
        }
        let c = c.map_coeffs(|x| x / q as i64);
        if !c.is_zero() {
            out.push((r, c));
        }
    }
    Ok(out)
}

/// Divisibility witness for one level: the residues whose Fourier
/// coefficient survived exact division by `p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelWitness {
    pub level: u32,
    pub support: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecoveryStatus {
    Exact,
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryReport {
    pub form: ExponentialForm,
    pub levels: Vec<u32>,
    pub witnesses: Vec<LevelWitness>,
    pub status: RecoveryStatus,
}

impl RecoveryReport {
    /// A report for a tower that failed a check.
    pub fn inconsistent(p: u64, levels: Vec<u32>, err: &RigidityError) -> Self {
        RecoveryReport {
            form: ExponentialForm::empty(p),
            levels,
            witnesses: Vec::new(),
            status: RecoveryStatus::Inconsistent(err.to_string()),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == RecoveryStatus::Exact
    }
}

impl fmt::Display for RecoveryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            RecoveryStatus::Exact => writeln!(f, "status: exact")?,
            RecoveryStatus::Inconsistent(why) => writeln!(f, "status: inconsistent ({why})")?,
        }
        let lv: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        writeln!(f, "levels: {}", lv.join(" "))?;
        for w in &self.witnesses {
            let s: Vec<String> = w.support.iter().map(|r| r.to_string()).collect();
            writeln!(f, "level {}: support [{}]", w.level, s.join(","))?;
        }
        writeln!(f, "terms: {}", self.form.len())?;
        if !self.form.is_empty() {
            writeln!(f, "{}", self.form)?;
        }
        Ok(())
    }
}

/// Recover `Σ d_i (1+T)^{e_i}` with at most `bound` terms from full sample
/// levels by exact Fourier inversion, checking that supports refine from
/// each level to the next.
pub fn fit_bounded(tower: &[SampleSet], bound: usize) -> Result<RecoveryReport, RigidityError> {
    let first = tower.first().ok_or_else(|| RigidityError::DegenerateInput("empty sample tower".into()))?;
    let p = first.p();
    let mut prev: Option<(u32, Vec<(u64, CycloInt)>)> = None;
    let mut witnesses = Vec::new();
    let mut levels = Vec::new();
    for s in tower {
        if s.p() != p {
            return Err(RigidityError::Inconsistent("samples use different primes".into()));
        }
        let n = s.level();
        if let Some((m, _)) = &prev {
            if n <= *m {
                return Err(RigidityError::Inconsistent("levels must increase".into()));
            }
        }
        let coeffs = fourier(s)?;
        if coeffs.len() > bound {
            return Err(RigidityError::SupportTooLarge { level: n, found: coeffs.len(), bound });
        }
        if let Some((m, below)) = &prev {
            check_refines(p, *m, below, n, &coeffs)?;
        }
        witnesses.push(LevelWitness { level: n, support: coeffs.iter().map(|(r, _)| *r).collect() });
        levels.push(n);
        prev = Some((n, coeffs));
    }
    let (top, coeffs) = prev.unwrap();
    let form =
        ExponentialForm::new(p, coeffs.into_iter().map(|(r, c)| (c, PadicNum::from_int(p, r as i64, top as i64))));
    Ok(RecoveryReport { form, levels, witnesses, status: RecoveryStatus::Exact })
}

fn check_refines(
    p: u64,
    m: u32,
    below: &[(u64, CycloInt)],
    n: u32,
    above: &[(u64, CycloInt)],
) -> Result<(), RigidityError> {
    let qm = p.pow(m);
    let mut sums: BTreeMap<u64, CycloInt> = BTreeMap::new();
    for (r, c) in above {
        let e = sums.entry(r % qm).or_insert_with(|| CycloInt::zero(1));
        *e = e.add_ref(c);
    }
    let mut lower: BTreeMap<u64, CycloInt> = below.iter().cloned().collect();
    for (r, c) in sums {
        let d = lower.remove(&r).unwrap_or_else(|| CycloInt::zero(1));
        if !c.value_eq(&d) {
            return Err(RigidityError::LevelMismatch { level: n, residue: r });
        }
    }
    match lower.into_keys().next() {
        Some(r) => Err(RigidityError::LevelMismatch { level: n, residue: r }),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact,
    /// First sample exponent at which the form disagrees.
    Mismatch {
        a: u64,
    },
}

/// Compare a form against every sample exactly.
pub fn verify_form(form: &ExponentialForm, s: &SampleSet) -> Verdict {
    let q = s.p().pow(s.level());
    for a in 0..q {
        if !form.eval_root(s.level(), a).value_eq(s.value(a)) {
            return Verdict::Mismatch { a };
        }
    }
    Verdict::Exact
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: u64, v: i64) -> PadicNum {
        PadicNum::from_int(p, v, 20)
    }

    fn samples(p: u64, n: u32, f: impl Fn(u64) -> CycloInt) -> SampleSet {
        SampleSet::from_fn(p, n, RootOfUnity::one(), f)
    }

    #[test]
    fn single_fits() {
        let s = samples(3, 2, |a| CycloInt::root(9, 2 * a as i64));
        let fit = fit_single(&s).unwrap();
        assert_eq!(fit.xi, RootOfUnity::one());
        assert_eq!(fit.e, PadicNum::from_int(3, 2, 2));

        let s = samples(3, 2, |a| CycloInt::root(3, 1).mul_ref(&CycloInt::root(9, 2 * a as i64)));
        let fit = fit_single(&s).unwrap();
        assert_eq!(fit.xi, RootOfUnity::new(3, 1));
        assert_eq!(fit.e, PadicNum::from_int(3, 2, 2));

        let fit = fit_single(&samples(3, 2, |_| CycloInt::one(1))).unwrap();
        assert_eq!(fit.e, PadicNum::from_int(3, 0, 2));

        let bad = samples(3, 1, |a| CycloInt::from_int(1, a as i64 + 2));
        assert_eq!(fit_single(&bad), Err(RigidityError::NotMonomial(0)));
        let incoherent = samples(3, 2, |a| CycloInt::root(9, (a * a) as i64));
        assert!(matches!(fit_single(&incoherent), Err(RigidityError::Inconsistent(_))));
    }

    #[test]
    fn bounded_examples() {
        let zero = [samples(3, 1, |_| CycloInt::zero(1))];
        let r = fit_bounded(&zero, 0).unwrap();
        assert!(r.is_exact() && r.form.is_empty());

        let f = |a: u64| CycloInt::root(9, a as i64).scale(&2).add_ref(&CycloInt::root(9, 5 * a as i64));
        let r = fit_bounded(&[samples(3, 1, |a| f(3 * a)), samples(3, 2, f)], 2).unwrap();
        let expect = ExponentialForm::new(3, [(CycloInt::from_int(1, 2), e(3, 1)), (CycloInt::one(1), e(3, 5))]);
        assert_eq!(r.form.residues(2), vec![1, 5]);
        assert_eq!(r.form.terms()[0].coeff, expect.terms()[0].coeff);
        assert_eq!(r.witnesses[0].support, vec![1, 2]);

        let g = |a: u64| {
            CycloInt::root(9, a as i64)
                .add_ref(&CycloInt::root(9, 2 * a as i64))
                .add_ref(&CycloInt::root(9, 4 * a as i64))
        };
        assert_eq!(
            fit_bounded(&[samples(3, 2, g)], 2),
            Err(RigidityError::SupportTooLarge { level: 2, found: 3, bound: 2 })
        );
    }

    #[test]
    fn fourier_matches_brute_force() {
        // Independent oracle: evaluate each candidate monomial sum and compare.
        let f = |a: u64| {
            CycloInt::root(12, 1)
                .mul_ref(&CycloInt::root(25, 3 * a as i64))
                .sub_ref(&CycloInt::root(25, 7 * a as i64).scale(&3))
        };
        let s = samples(5, 2, f);
        let coeffs = fourier(&s).unwrap();
        assert_eq!(coeffs.iter().map(|(r, _)| *r).collect::<Vec<_>>(), vec![3, 7]);
        for a in 0..25 {
            let v = coeffs
                .iter()
                .fold(CycloInt::zero(300), |acc, (r, c)| acc.add_ref(&c.mul_ref(&CycloInt::root(25, (a * r) as i64))));
            assert!(v.value_eq(&f(a)));
        }
        assert_eq!(s.conductor(), 300);
    }

    #[test]
    fn perturbation_and_mismatch() {
        let form = ExponentialForm::new(3, [(CycloInt::one(1), e(3, 2))]);
        let s = form.samples(2);
        assert_eq!(verify_form(&form, &s), Verdict::Exact);
        let bumped = s.with_value(4, s.value(4).add_ref(&CycloInt::one(1)));
        assert!(matches!(fit_bounded(&[bumped], 4), Err(RigidityError::NotDivisible { level: 2, .. })));
        let cubes = samples(3, 2, |a| CycloInt::root(9, 3 * a as i64));
        assert_eq!(verify_form(&form, &cubes), Verdict::Mismatch { a: 1 });
        assert_eq!(verify_form(&ExponentialForm::empty(3), &samples(3, 1, |_| CycloInt::zero(1))), Verdict::Exact);
    }

    #[test]
    fn level_mismatch_detected() {
        let lower = samples(3, 1, |a| CycloInt::root(3, a as i64));
        let upper = samples(3, 2, |a| CycloInt::root(9, 2 * a as i64));
        assert!(matches!(fit_bounded(&[lower, upper], 1), Err(RigidityError::LevelMismatch { level: 2, .. })));
    }

    #[test]
    fn single_agrees_with_bounded() {
        let s = samples(5, 2, |a| CycloInt::root(5, 2).mul_ref(&CycloInt::root(25, 7 * a as i64)));
        let one = fit_single(&s).unwrap();
        let many = fit_bounded(std::slice::from_ref(&s), 1).unwrap();
        let t = &many.form.terms()[0];
        assert!(t.coeff.value_eq(&one.xi.to_cyclo()));
        assert!(t.exp.congruent(&one.e));
    }
}
