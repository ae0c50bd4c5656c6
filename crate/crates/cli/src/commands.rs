use std::fmt::Write as _;
use std::fs;

use anyhow::{anyhow, ensure, Context, Result};

use cmrig::cyclo::{house, loxton_bound, n_roi, parse_cyclo_int, quotient_reduce, CycloError, CycloInt};
use cmrig::lambda::{
    eval_small, root_bound, specialize, stable_polygon_probe, weierstrass_prep, LambdaSeries, SpecPoint,
};
use cmrig::modforms::{
    charpoly_from_conjugates, charpoly_house_bounds, cm_check, cm_family_coeff, conjugate_ordinarity_check,
    hecke_field_degree, p_stabilize, pipeline_run, ramanujan_check, slope_check, theta_build, trivial_bound_check,
    Eigensystem, FrobeniusPair, HeckeCharData, ImagQuadField, PipelineConfig, Place,
};
use cmrig::newton::{polygon, root_valuations};
use cmrig::padic::{PadicCyclo, PadicNum};
use cmrig::rigidity::{
    cancellation_probe, cramer_recover, fit_bounded, fit_single, vandermonde_select, verify_form, ExponentialForm,
    SampleSet, Verdict,
};

use crate::config::RunConfig;
use crate::formats::{self, p_level, padic_cyclo};
use crate::{selftest, Cli, Command, Outcome};

pub fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    let input = || -> Result<String> {
        let path = cli.global.input.as_ref().ok_or_else(|| anyhow!("this subcommand needs --in <file>"))?;
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
    };
    let explicit_p = cli.global.p;
    match &cli.command {
        Command::Wprep => wprep(&series(&input()?, explicit_p)?),
        Command::Eval { t } => eval(&series(&input()?, explicit_p)?, t),
        Command::Binom { e, unit } => binom(cfg, e.as_deref(), unit.as_deref()),
        Command::Specialize { point, embed } => spec(&series(&input()?, explicit_p)?, point, *embed),
        Command::Newton { probe: false } => newton(&input()?),
        Command::Newton { probe: true } => probe(&input()?, cfg),
        Command::House { alpha, bits, base } => house_cmd(alpha, *bits, *base),
        Command::Nroi { alpha, search, cap } => nroi(alpha, *search, *cap),
        Command::Loxton { n } => Ok(Outcome::pass(format!(
            "n: {n}\nc: {}\nd: {}\nbound: {}\n",
            cfg.loxton_c,
            cfg.loxton_d,
            loxton_bound(*n, cfg.loxton_c, cfg.loxton_d)?
        ))),
        Command::Quotient { alpha, n, m, beta } => quotient(cfg.p, alpha, *n, *m, beta.as_deref()),
        Command::Fit { bound, single, probe } => fit(&formats::parse_tower(&input()?)?, *bound, *single, *probe),
        Command::Verify { form } => {
            let form = ExponentialForm::parse_text(&fs::read_to_string(form)?)?;
            let s = SampleSet::parse_text(&input()?)?;
            let v = verify_form(&form, &s);
            Ok(Outcome {
                report: match v {
                    Verdict::Exact => "verdict: exact\n".to_string(),
                    Verdict::Mismatch { a } => format!("verdict: mismatch at a={a}\n"),
                },
                ok: v == Verdict::Exact,
            })
        }
        Command::Vandermonde => vandermonde(&ExponentialForm::parse_text(&input()?)?),
        Command::Cramer { k } => cramer(&input()?, *k),
        Command::Theta { disc, bound } => {
            let psi = HeckeCharData::canonical(*disc)?;
            Ok(Outcome::pass(theta_build(&psi, cfg.p, *bound)?.to_text()))
        }
        Command::Cm { disc, ell: Some(ell) } => family(cfg, *disc, *ell),
        Command::Cm { disc, ell: None } => cm(&eigensystem(&input()?)?, *disc),
        Command::Bounds { ell } => bounds(&eigensystem(&input()?)?, ell.as_deref()),
        Command::Stabilize => {
            let f = eigensystem(&input()?)?;
            let place = Place::new(f.p(), cfg.place)?;
            Ok(Outcome::pass(p_stabilize(&f, place, cfg.prec)?.to_text()))
        }
        Command::Slope => {
            let f = eigensystem(&input()?)?;
            let place = Place::new(f.p(), cfg.place)?;
            let s = slope_check(&f, place, cfg.prec)?;
            Ok(Outcome { report: format!("{s}\n"), ok: s.holds })
        }
        Command::HeckeDegree { rank } => {
            let d = hecke_field_degree(&eigensystem(&input()?)?, *rank)?;
            Ok(Outcome { report: format!("{d}\n"), ok: d.within_bound().unwrap_or(true) })
        }
        Command::Charpoly { disc, ell, orbit, k } => {
            let (pairs, base) = match disc {
                Some(disc) => {
                    let psi = HeckeCharData::canonical(*disc)?;
                    let ell = ell.ok_or_else(|| anyhow!("--E needs --ell"))?;
                    (vec![FrobeniusPair::from_psi(&psi, ell)?], 1)
                }
                None => formats::parse_pairs(&input()?)?,
            };
            charpoly(pairs, base, *orbit, *k)
        }
        Command::Pipeline { disc, ell, k } => {
            let psi = HeckeCharData::canonical(*disc)?;
            let pc =
                PipelineConfig { place: cfg.place_at()?, levels: cfg.levels.clone(), k_target: *k, prec: cfg.prec };
            let report = pipeline_run(&psi, ell, &pc)?;
            Ok(Outcome { ok: report.all_weil(), report: report.to_string() })
        }
        Command::Selftest => selftest::run(cfg),
    }
}

fn series(src: &str, explicit_p: Option<u64>) -> Result<LambdaSeries> {
    let s = LambdaSeries::parse_text(src)?;
    if let Some(p) = explicit_p {
        ensure!(p == s.p(), "--p {p} disagrees with the series file (p = {})", s.p());
    }
    Ok(s)
}

fn eigensystem(src: &str) -> Result<Eigensystem> {
    Ok(Eigensystem::parse_text(src)?)
}

fn wprep(s: &LambdaSeries) -> Result<Outcome> {
    let w = weierstrass_prep(s)?;
    Ok(Outcome::pass(format!("{w}\nroot_bound: {}\n", root_bound(s)?)))
}

fn eval(s: &LambdaSeries, t: &str) -> Result<Outcome> {
    let t = parse_cyclo_int(t)?;
    let level = p_level(&t, s.p())?;
    let t = padic_cyclo(&t, s.p(), level, s.prec())?;
    let ev = eval_small(s, &t)?;
    Ok(Outcome::pass(format!("value: {}\nord: {}\ntail_bound: {}\n", ev.value, ev.value.ord(), ev.tail_bound)))
}

fn binom(cfg: &RunConfig, e: Option<&str>, unit: Option<&str>) -> Result<Outcome> {
    let mut out = String::new();
    let e = match (e, unit) {
        (Some(e), None) => formats::parse_padic(e, cfg.p, cfg.prec)?,
        (None, Some(u)) => {
            let u = formats::parse_padic(u, cfg.p, cfg.prec)?;
            let w = u.teichmuller()?;
            let one = u.one_unit_part()?;
            let log = one.log_one_unit()?;
            let base = PadicNum::from_int(cfg.p, 1 + cfg.p, cfg.prec).log_one_unit()?;
            let e = log.checked_div(&base)?;
            writeln!(out, "teichmuller: {w}")?;
            writeln!(out, "one_unit: {one}")?;
            writeln!(out, "log: {log}")?;
            e
        }
        _ => return Err(anyhow!("give exactly one of --e and --unit")),
    };
    writeln!(out, "e: {e}")?;
    out.push_str(&LambdaSeries::binomial(&e, cfg.trunc, cfg.prec)?.to_text());
    Ok(Outcome::pass(out))
}

fn spec(s: &LambdaSeries, point: &str, embed: Option<u32>) -> Result<Outcome> {
    let pt: SpecPoint = point.parse()?;
    let pt = SpecPoint::new(pt.k, pt.r, pt.a, s.p())?;
    let ev = specialize(s, &pt)?;
    let value = match embed {
        Some(r) => ev.value.embed(r)?,
        None => ev.value,
    };
    Ok(Outcome::pass(format!("point: {pt}\nvalue: {value}\nord: {}\ntail_bound: {}\n", value.ord(), ev.tail_bound)))
}

fn newton(src: &str) -> Result<Outcome> {
    let np = polygon(&formats::parse_poly(src)?)?;
    let vals: Vec<String> = root_valuations(&np).iter().map(ToString::to_string).collect();
    Ok(Outcome::pass(format!("{np}\nroot_valuations: {}\n", vals.join(" "))))
}

fn probe(src: &str, cfg: &RunConfig) -> Result<Outcome> {
    let r = formats::parse_probe(src)?;
    let (p, prec) = (r[0].p(), r[0].prec());
    let points: Vec<PadicCyclo> =
        cfg.levels.iter().map(|&l| PadicCyclo::zeta(p, l, 1, prec).sub_ref(&PadicCyclo::one(p, l, prec))).collect();
    let sets = stable_polygon_probe(&r, &points)?;
    let mut out = String::new();
    for (l, s) in cfg.levels.iter().zip(&sets) {
        let idx: Vec<String> = s.iter().map(ToString::to_string).collect();
        writeln!(out, "level {l}: vertices {{{}}}", idx.join(","))?;
    }
    let tail = &sets[sets.len().saturating_sub(3)..];
    let stable = tail.windows(2).all(|w| w[0] == w[1]);
    writeln!(out, "stable: {stable}")?;
    Ok(Outcome { report: out, ok: stable })
}

fn house_cmd(alpha: &str, bits: u32, base: Option<u64>) -> Result<Outcome> {
    let a = parse_cyclo_int(alpha)?;
    let mut out = format!("house: {}\n", house(&a, bits));
    if let Some(k) = base {
        for c in a.galois_orbit(k)? {
            writeln!(out, "conjugate: {c}")?;
        }
        writeln!(out, "trace: {}", a.trace_to_subfield(k)?)?;
    }
    Ok(Outcome::pass(out))
}

fn nroi(alpha: &str, search: u64, cap: usize) -> Result<Outcome> {
    let a = parse_cyclo_int(alpha)?;
    match n_roi(&a, search, cap) {
        Ok(n) => Ok(Outcome::pass(format!("n_roi: {n}\n"))),
        Err(CycloError::NotFound { cap }) => {
            Ok(Outcome { report: format!("n_roi: not found within {cap} roots of unity\n"), ok: false })
        }
        Err(e) => Err(e.into()),
    }
}

fn quotient(p: u64, alpha: &str, n: u32, m: u32, beta: Option<&str>) -> Result<Outcome> {
    let q = p.pow(n);
    let lift = |s: &str| -> Result<CycloInt> { Ok(parse_cyclo_int(s)?.embed(q)?) };
    let a = lift(alpha)?;
    let ra = quotient_reduce(&a, p, n, m)?;
    let mut out = format!("image: {ra}\n");
    let Some(beta) = beta else {
        return Ok(Outcome::pass(out));
    };
    let b = lift(beta)?;
    let rb = quotient_reduce(&b, p, n, m)?;
    let sum = quotient_reduce(&a.add_ref(&b), p, n, m)? == ra.add_ref(&rb);
    let prod = quotient_reduce(&a.mul_ref(&b), p, n, m)? == ra.mul_ref(&rb);
    writeln!(out, "beta_image: {rb}")?;
    writeln!(out, "additive: {sum}")?;
    writeln!(out, "multiplicative: {prod}")?;
    Ok(Outcome { report: out, ok: sum && prod })
}

fn fit(tower: &[SampleSet], bound: usize, single: bool, probe: Option<u32>) -> Result<Outcome> {
    if single {
        let f = fit_single(&tower[0])?;
        return Ok(Outcome::pass(format!("xi: {}\ne: {}\n", f.xi, f.e)));
    }
    if let Some(m) = probe {
        let mut out = String::new();
        let pats = cancellation_probe(&tower[0], m)?;
        for pat in &pats {
            writeln!(out, "{pat}")?;
        }
        return Ok(Outcome { ok: pats.iter().all(|p| p.is_clean()), report: out });
    }
    let report = fit_bounded(tower, bound)?;
    Ok(Outcome { ok: report.is_exact(), report: format!("{report}\n") })
}

fn vandermonde(form: &ExponentialForm) -> Result<Outcome> {
    let (d, e) = split_form(form);
    let sel = vandermonde_select(form.p(), &d, &e)?;
    let roots: Vec<String> = sel.roots.iter().map(ToString::to_string).collect();
    Ok(Outcome::pass(format!("roots: {}\ndet: {}\n", roots.join(" "), sel.det)))
}

fn cramer(src: &str, k: u32) -> Result<Outcome> {
    let (form, samples) = formats::parse_cramer(src)?;
    let (d, e) = split_form(&form);
    let xs = cramer_recover(&d, &e, k, &samples)?;
    let mut out = String::new();
    for (t, x) in form.terms().iter().zip(&xs) {
        writeln!(out, "term: d={} e={} power={}", t.coeff, t.exp, x)?;
    }
    Ok(Outcome::pass(out))
}

fn split_form(form: &ExponentialForm) -> (Vec<CycloInt>, Vec<PadicNum>) {
    form.terms().iter().map(|t| (t.coeff.clone(), t.exp.clone())).unzip()
}

fn family(cfg: &RunConfig, disc: u64, ell: u64) -> Result<Outcome> {
    let psi = HeckeCharData::canonical(disc)?;
    let fc = cm_family_coeff(&psi, ell, cfg.place_at()?, cfg.prec)?;
    let mut out = format!("character: {psi}\nplace: {}\nell: {ell}\nanchor: {}\n", fc.place, fc.anchor);
    for t in &fc.terms {
        writeln!(out, "term: alpha={} d={} e={} pi={}", t.alpha, t.d, t.e, t.pi)?;
    }
    if fc.terms.is_empty() {
        writeln!(out, "form: 0")?;
    }
    Ok(Outcome::pass(out))
}

fn cm(f: &Eigensystem, disc: u64) -> Result<Outcome> {
    let c = cm_check(f, ImagQuadField::new(disc)?)?;
    let list = |v: &[u64]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    let mut out = format!("tested: {}\nfailures: {}\n", list(&c.tested), list(&c.failures));
    if let Some(w) = &c.warning {
        writeln!(out, "warning: {w}")?;
    }
    writeln!(out, "holds: {}", c.holds())?;
    Ok(Outcome { ok: c.holds(), report: out })
}

fn bounds(f: &Eigensystem, ell: Option<&[u64]>) -> Result<Outcome> {
    let primes: Vec<u64> = match ell {
        Some(l) => l.to_vec(),
        None => f
            .coeffs()
            .keys()
            .copied()
            .filter(|&n| cmrig::arith::is_prime(n) && !(f.is_stabilized() && n == f.p()))
            .collect(),
    };
    let mut out = String::new();
    let mut ok = true;
    for l in primes {
        let r = ramanujan_check(f, l)?;
        let t = trivial_bound_check(f, l)?;
        ok &= r.holds && t.holds;
        writeln!(out, "ramanujan: {r}")?;
        writeln!(out, "trivial: {t}")?;
    }
    if f.weight() == 1 {
        let c = conjugate_ordinarity_check(f)?;
        ok &= c.holds;
        writeln!(out, "ordinarity: {c}")?;
    }
    writeln!(out, "holds: {ok}")?;
    Ok(Outcome { report: out, ok })
}

fn charpoly(mut pairs: Vec<FrobeniusPair>, base: u64, orbit: bool, k: u32) -> Result<Outcome> {
    if orbit {
        pairs = pairs[0].orbit(base);
    }
    let cp = charpoly_from_conjugates(&pairs, base)?;
    let hb = charpoly_house_bounds(&cp, k)?;
    let mut out = format!("pairs: {}\n{cp}", pairs.len());
    for h in &hb {
        writeln!(out, "bound: {h}")?;
    }
    let ok = hb.iter().all(|h| h.holds);
    Ok(Outcome { report: out, ok })
}
