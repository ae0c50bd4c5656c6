use std::fmt;

use super::character::HeckeCharData;
use super::place::Place;
use super::quadratic::{QuadInt, Splitting};
use super::ModformsError;
use crate::arith::{factor, gcd, lcm};
use crate::cyclo::{disc_of, fixing_group, CycloInt, CycloNum, QuadCycloNum, RootOfUnity};
use crate::padic::{PadicCyclo, PadicNum};
use crate::rigidity::{cramer_recover, fit_bounded, vandermonde_select, ExponentialForm, RecoveryReport};

/// One term `d·(1+T)^e` of a CM family coefficient, with the algebraic
/// number `π` whose powers give its weight-k values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTerm {
    /// Generator of the prime above ℓ.
    pub alpha: QuadInt,
    pub d: CycloInt,
    pub e: PadicNum,
    /// `α / ω(α)`, so that `⟨α⟩ = (1+p)^e` under the place.
    pub pi: CycloInt,
}

/// `F_ℓ(T) = Σ d_i (1+T)^{e_i}` for the CM family through ψ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCoeff {
    pub ell: u64,
    pub place: Place,
    /// Weight of ψ; the family runs over weights congruent to it mod p − 1.
    pub anchor: u32,
    pub terms: Vec<FamilyTerm>,
}

impl FamilyCoeff {
    pub fn form(&self) -> ExponentialForm {
        ExponentialForm::new(self.place.p(), self.terms.iter().map(|t| (t.d.clone(), t.e.clone())))
    }

    /// `F(P_{k,ζ})` for `ζ = ζ_{p^r}^a`, computed p-adically.
    pub fn specialize(&self, k: u32, r: u32, a: u64, prec: i64) -> Result<PadicCyclo, ModformsError> {
        let p = self.place.p();
        let q = p.pow(r);
        let one_p = PadicNum::from_int(p, 1 + p as i64, prec);
        let mut acc = PadicCyclo::zero(p, r, prec);
        for t in &self.terms {
            let e = t.e.to_bigint().ok_or(ModformsError::DomainError("exponent is not integral".into()))?;
            let res = (&e % num_bigint::BigInt::from(q)).try_into().unwrap_or(0u64);
            let zeta = PadicCyclo::zeta(p, r, (a * res % q.max(1)) as i64, prec);
            let d = self.place.embed_int(&t.d, prec)?;
            let d = if d.level() < r { d.embed(r)? } else { d };
            let scale = one_p.pow_big(&e).pow(k as u64 - 1);
            acc = acc.add_ref(&d.mul_ref(&zeta).scale(&scale));
        }
        Ok(acc)
    }

    /// `F(P_{k,ζ}) = Σ d_i ζ^{e_i} π_i^{k−1}` computed exactly.
    pub fn value_exact(&self, k: u32, zeta: RootOfUnity) -> CycloNum {
        self.terms.iter().fold(CycloNum::zero(1), |acc, t| {
            let res = t.e.to_bigint().unwrap_or_default() % num_bigint::BigInt::from(zeta.order());
            let res: i64 = res.try_into().unwrap_or(0);
            let z: CycloInt = zeta.pow(res).to_cyclo();
            acc.add_ref(&t.d.mul_ref(&z).mul_ref(&t.pi.pow(k as u64 - 1)).to_num())
        })
    }
}

/// The coefficient at a split prime ℓ of the Λ-adic CM family through ψ.
///
/// For each generator `α` of a prime above ℓ, its image `u` under the place
/// splits as `ω(u)·⟨u⟩`; then `e = log⟨u⟩ / log(1+p)` and
/// `d = η(α)·ω(u)^{k₀−1}`, so that specializing at weights `k ≡ k₀ mod p−1`
/// gives `ψ_k(𝔩) + ψ_k(𝔩̄)`.
pub fn cm_family_coeff(psi: &HeckeCharData, ell: u64, place: Place, prec: i64) -> Result<FamilyCoeff, ModformsError> {
    let field = psi.field();
    let p = place.p();
    if field.splitting(p) != Splitting::Split {
        return Err(ModformsError::DomainError(format!("p = {p} does not split in E")));
    }
    match field.splitting(ell) {
        Splitting::Inert => return Err(ModformsError::InertPrime(ell)),
        Splitting::Ramified => return Err(ModformsError::RamifiedPrime(ell)),
        Splitting::Split => {}
    }
    if ell == p || psi.modulus_norm().is_multiple_of(ell) {
        return Err(ModformsError::RamifiedPrime(ell));
    }
    let alpha = field.element_of_norm(ell).expect("split primes have generators");
    let log_base = PadicNum::from_int(p, 1 + p as i64, prec).log_one_unit()?;
    let k0 = psi.weight();
    let mut terms = Vec::new();
    for a in [alpha, field.conj(alpha)] {
        let eta = psi.eta(a).ok_or(ModformsError::RamifiedPrime(ell))?;
        let c = psi.embed(a);
        let u = place.embed_tame(&c, prec)?;
        let w = place.teichmuller_root(&u)?;
        let e = u.one_unit_part()?.log_one_unit()?.checked_div(&log_base)?;
        let d: CycloInt = eta.mul(&w.pow(k0 as i64 - 1)).to_cyclo();
        let pi = c.mul_ref(&w.pow(-1).to_cyclo());
        terms.push(FamilyTerm { alpha: a, d: d.normalize_conductor(), e, pi: pi.normalize_conductor() });
    }
    Ok(FamilyCoeff { ell, place, anchor: k0, terms })
}

/// Parameters for [`pipeline_run`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub place: Place,
    pub levels: Vec<u32>,
    pub k_target: u32,
    pub prec: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeReport {
    pub ell: u64,
    pub splitting: Splitting,
    pub planted: ExponentialForm,
    pub recovery: RecoveryReport,
    pub roots: Vec<RootOfUnity>,
    pub det: Option<CycloNum>,
    /// Recovered `π_i^{k−1}`.
    pub powers: Vec<QuadCycloNum>,
    pub pis: Vec<CycloInt>,
    pub weil: bool,
    /// `[L_ℓ : Q]` for `L_ℓ = Q({d_i}, {π_i})`.
    pub degree: u64,
    /// `2m[L_ℓ : Q]`.
    pub c_ell: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    pub character: String,
    pub place: Place,
    pub levels: Vec<u32>,
    pub k_target: u32,
    pub primes: Vec<PrimeReport>,
}

impl PipelineReport {
    pub fn all_weil(&self) -> bool {
        self.primes.iter().all(|r| r.weil)
    }
}

impl fmt::Display for PipelineReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "character: {}", self.character)?;
        writeln!(f, "place: {}", self.place)?;
        let lv: Vec<String> = self.levels.iter().map(u32::to_string).collect();
        writeln!(f, "levels: {}", lv.join(","))?;
        writeln!(f, "k_target: {}", self.k_target)?;
        for r in &self.primes {
            writeln!(f, "ell: {}", r.ell)?;
            writeln!(f, "  splitting: {}", r.splitting)?;
            writeln!(f, "  terms: {}", r.planted.len())?;
            for line in r.planted.to_string().lines().filter(|_| !r.planted.is_empty()) {
                writeln!(f, "  {line}")?;
            }
            writeln!(f, "  fit: {}", if r.recovery.is_exact() { "exact" } else { "failed" })?;
            if r.planted.is_empty() {
                writeln!(f, "  weil: vacuous")?;
                continue;
            }
            let roots: Vec<String> = r.roots.iter().map(|z| z.to_string()).collect();
            writeln!(f, "  roots: {}", roots.join(" "))?;
            if let Some(det) = &r.det {
                writeln!(f, "  det: {det}")?;
            }
            for (x, pi) in r.powers.iter().zip(&r.pis) {
                writeln!(f, "  pi: {pi}  power: {x}")?;
            }
            writeln!(f, "  weil: {}", if r.weil { "exact" } else { "failed" })?;
            writeln!(f, "  degree: {}", r.degree)?;
            writeln!(f, "  C: {}", r.c_ell)?;
        }
        Ok(())
    }
}

fn stage(name: &'static str) -> impl Fn(ModformsError) -> ModformsError {
    move |e| ModformsError::Stage { stage: name, message: e.to_string() }
}

/// `[Q(x_1, …) : Q]` for cyclotomic numbers.
pub fn field_degree(xs: &[CycloNum]) -> u64 {
    let xs: Vec<CycloNum> = xs.iter().map(CycloNum::normalize_conductor).collect();
    let n = xs.iter().fold(1, |acc, x| lcm(acc, x.conductor()));
    let xs: Vec<CycloNum> = xs.iter().map(|x| x.embed(n).expect("conductor divides n")).collect();
    let group = fixing_group(n, 1);
    let stab = group.iter().filter(|&&s| xs.iter().all(|x| x.galois(s as i64) == *x)).count();
    (group.len() / stab) as u64
}

/// End-to-end run: family coefficients, weight-one sample towers, bounded
/// fitting, root selection, Cramer recovery at the target weight, and the
/// Weil check `π π̄ = ℓ^{k−1}` on the recovered values.
pub fn pipeline_run(
    psi: &HeckeCharData,
    primes: &[u64],
    cfg: &PipelineConfig,
) -> Result<PipelineReport, ModformsError> {
    let p = cfg.place.p();
    if cfg.levels.is_empty() {
        return Err(ModformsError::DomainError("need at least one tower level".into()));
    }
    if cfg.k_target < 2 {
        return Err(ModformsError::DomainError("target weight must be at least 2".into()));
    }
    if (cfg.k_target as i64 - psi.weight() as i64) % (p as i64 - 1) != 0 {
        return Err(ModformsError::DomainError(format!(
            "target weight {} is not congruent to {} mod {}",
            cfg.k_target,
            psi.weight(),
            p - 1
        )));
    }
    let field = psi.field();
    let mut reports = Vec::new();
    for &ell in primes {
        let splitting = field.splitting(ell);
        let fam = match cm_family_coeff(psi, ell, cfg.place, cfg.prec) {
            Ok(f) => Some(f),
            Err(ModformsError::InertPrime(_)) => None,
            Err(e) => return Err(stage("family")(e)),
        };
        let planted = fam.as_ref().map(FamilyCoeff::form).unwrap_or_else(|| ExponentialForm::empty(p));
        let tower: Vec<_> = cfg.levels.iter().map(|&n| planted.samples(n)).collect();
        let recovery = fit_bounded(&tower, 2).map_err(|e| stage("fit")(e.into()))?;
        let top = *cfg.levels.iter().max().unwrap();
        let same = recovery.form.len() == planted.len()
            && planted.terms().iter().all(|b| {
                recovery
                    .form
                    .terms()
                    .iter()
                    .any(|a| a.coeff.value_eq(&b.coeff) && a.exp.congruent(&b.exp.truncate(top as i64)))
            });
        if !recovery.is_exact() || !same {
            return Err(ModformsError::Stage {
                stage: "fit",
                message: format!("recovered form differs from the family coefficient at ℓ = {ell}"),
            });
        }
        let Some(fam) = fam else {
            reports.push(PrimeReport {
                ell,
                splitting,
                planted,
                recovery,
                roots: Vec::new(),
                det: None,
                powers: Vec::new(),
                pis: Vec::new(),
                weil: true,
                degree: 1,
                c_ell: 0,
            });
            continue;
        };
        let ds: Vec<CycloInt> = recovery.form.terms().iter().map(|t| t.coeff.clone()).collect();
        let es: Vec<PadicNum> = recovery.form.terms().iter().map(|t| t.exp.clone()).collect();
        let sel = vandermonde_select(p, &ds, &es).map_err(|e| stage("vandermonde")(e.into()))?;
        // Order the planted π's like the recovered terms.
        let pis: Vec<CycloInt> = recovery
            .form
            .terms()
            .iter()
            .map(|t| {
                fam.terms
                    .iter()
                    .find(|ft| ft.e.truncate(top as i64).congruent(&t.exp))
                    .map(|ft| ft.pi.clone())
                    .expect("terms match")
            })
            .collect();
        let d = field.d();
        let samples = sel
            .roots
            .iter()
            .map(|z| {
                let v = fam.value_exact(cfg.k_target, *z);
                quad_lift(&v, d).map(|q| (*z, q))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(stage("cramer"))?;
        let powers = cramer_recover(&ds, &es, cfg.k_target, &samples).map_err(|e| stage("cramer")(e.into()))?;
        let target = CycloNum::from_int(1, (ell as i64).pow(cfg.k_target - 1));
        let mut weil = true;
        for (x, pi) in powers.iter().zip(&pis) {
            if !x.to_cyclo().value_eq(&pi.pow(cfg.k_target as u64 - 1).to_num()) {
                return Err(ModformsError::Stage {
                    stage: "cramer",
                    message: format!("recovered power differs from the planted value at ℓ = {ell}"),
                });
            }
            weil &= x.mul_ref(&x.complex_conj()).to_cyclo().value_eq(&target);
        }
        let gens: Vec<CycloNum> = ds.iter().chain(&pis).map(CycloInt::to_num).collect();
        let degree = field_degree(&gens);
        let m = 1;
        reports.push(PrimeReport {
            ell,
            splitting,
            planted,
            recovery,
            roots: sel.roots,
            det: Some(sel.det),
            powers,
            pis,
            weil,
            degree,
            c_ell: 2 * m * degree,
        });
    }
    Ok(PipelineReport {
        character: psi.to_string(),
        place: cfg.place,
        levels: cfg.levels.clone(),
        k_target: cfg.k_target,
        primes: reports,
    })
}

/// Write `x ∈ Q(ζ_N)` as `a + b√−d` with `a, b` in the largest cyclotomic
/// subfield not containing `√−d`.
fn quad_lift(x: &CycloNum, d: u64) -> Result<QuadCycloNum, ModformsError> {
    let big_d = disc_of(d);
    let n = lcm(x.conductor(), big_d);
    let mut m = n;
    for (l, _) in factor(big_d) {
        while m.is_multiple_of(l) {
            m /= l;
        }
    }
    debug_assert_eq!(gcd(m, big_d), 1);
    Ok(QuadCycloNum::from_cyclo_field(x, m, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::theta_build;

    fn setup() -> (HeckeCharData, Place) {
        (HeckeCharData::canonical(4).unwrap(), Place::new(5, 1).unwrap())
    }

    #[test]
    fn family_round_trip_at_weight_two() {
        let (psi, v) = setup();
        let f = theta_build(&psi, 5, 40).unwrap();
        for ell in [13, 17, 29, 37] {
            let fam = cm_family_coeff(&psi, ell, v, 30).unwrap();
            assert_eq!(fam.form().len(), 2);
            let got = fam.specialize(2, 0, 0, 30).unwrap();
            let want = v.embed_int(f.coeff(ell).unwrap(), 30).unwrap();
            assert!(got.sub_ref(&want).is_zero(), "ℓ={ell}");
            // π π̄ = ℓ.
            for t in &fam.terms {
                assert!(t.pi.mul_ref(&t.pi.conj()).value_eq(&CycloInt::from_int(1, ell as i64)));
            }
            let exact = fam.value_exact(2, RootOfUnity::one());
            assert!(exact.value_eq(&f.coeff(ell).unwrap().to_num()));
        }
        assert!(matches!(cm_family_coeff(&psi, 7, v, 30), Err(ModformsError::InertPrime(7))));
        assert!(matches!(cm_family_coeff(&psi, 2, v, 30), Err(ModformsError::RamifiedPrime(2))));
    }

    #[test]
    fn family_matches_generic_specialization() {
        let (psi, v) = setup();
        let fam = cm_family_coeff(&psi, 13, v, 30).unwrap();
        // Weight one: coefficients are roots of unity and values cyclotomic.
        let form = fam.form();
        let lhs = fam.specialize(1, 1, 2, 30).unwrap();
        let rhs = v.embed_num(&fam.value_exact(1, RootOfUnity::new(5, 2)), 30).unwrap();
        assert!(lhs.sub_ref(&rhs).is_zero());
        assert_eq!(form.tame_conductor() % 4, 0);
    }

    #[test]
    fn pipeline_gaussian() {
        let (psi, v) = setup();
        let cfg = PipelineConfig { place: v, levels: vec![1, 2], k_target: 2, prec: 30 };
        let rep = pipeline_run(&psi, &[13, 3], &cfg).unwrap();
        assert!(rep.all_weil());
        let r13 = &rep.primes[0];
        assert_eq!(r13.degree, 2);
        assert_eq!(r13.c_ell, 4);
        assert!(rep.primes[1].planted.is_empty());
        let text = rep.to_string();
        assert!(text.contains("weil: exact"));
        let bad = PipelineConfig { k_target: 3, ..cfg };
        assert!(pipeline_run(&psi, &[13], &bad).is_err());
    }
}
