//! Small seeded runs of the library invariants plus the subcommand coverage audit.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::Result;
use clap::CommandFactory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cmrig::arith::is_prime;
use cmrig::cyclo::{quotient_reduce, CycloInt};
use cmrig::lambda::{weierstrass_prep, LambdaSeries};
use cmrig::modforms::{pipeline_run, theta_build, HeckeCharData, PipelineConfig};
use cmrig::newton::{polygon, root_valuations};
use cmrig::padic::{PadicCyclo, PadicNum, Valuation};
use cmrig::rigidity::{fit_bounded, ExponentialForm};

use crate::config::RunConfig;
use crate::{Cli, Outcome};

/// Every library operation and the one subcommand that exposes it.
pub const COVERAGE: &[(&str, &str, &str)] = &[
    ("padic", "ord", "eval"),
    ("padic", "teichmuller", "binom"),
    ("padic", "log_one_unit", "binom"),
    ("padic", "cyclo_embed", "specialize"),
    ("lambda", "weierstrass_prep", "wprep"),
    ("lambda", "root_bound", "wprep"),
    ("lambda", "eval_small", "eval"),
    ("lambda", "binomial_series", "binom"),
    ("lambda", "specialize", "specialize"),
    ("lambda", "stable_polygon_probe", "newton"),
    ("newton", "polygon", "newton"),
    ("newton", "root_valuations", "newton"),
    ("cyclo", "house", "house"),
    ("cyclo", "galois_orbit", "house"),
    ("cyclo", "trace_to_subfield", "house"),
    ("cyclo", "n_roi", "nroi"),
    ("cyclo", "loxton_bound", "loxton"),
    ("cyclo", "quotient_reduce", "quotient"),
    ("rigidity", "fit_single", "fit"),
    ("rigidity", "fit_bounded", "fit"),
    ("rigidity", "cancellation_probe", "fit"),
    ("rigidity", "verify_form", "verify"),
    ("rigidity", "vandermonde_select", "vandermonde"),
    ("rigidity", "cramer_recover", "cramer"),
    ("modforms", "theta_build", "theta"),
    ("modforms", "cm_check", "cm"),
    ("modforms", "cm_family_coeff", "cm"),
    ("modforms", "ramanujan_check", "bounds"),
    ("modforms", "trivial_bound_check", "bounds"),
    ("modforms", "conjugate_ordinarity_check", "bounds"),
    ("modforms", "p_stabilize", "stabilize"),
    ("modforms", "slope_check", "slope"),
    ("modforms", "hecke_field_degree", "hecke-degree"),
    ("modforms", "charpoly_from_conjugates", "charpoly"),
    ("modforms", "charpoly_house_bounds", "charpoly"),
    ("modforms", "pipeline_run", "pipeline"),
];

/// Problems with [`COVERAGE`]: duplicated operations, unknown subcommands,
/// and subcommands that expose nothing.
pub fn coverage_audit() -> Vec<String> {
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let mut problems = Vec::new();
    let mut seen: BTreeMap<(&str, &str), &str> = BTreeMap::new();
    for &(module, op, sub) in COVERAGE {
        if let Some(prev) = seen.insert((module, op), sub) {
            problems.push(format!("{module}::{op} is reachable from both {prev} and {sub}"));
        }
        if !names.iter().any(|n| n == sub) {
            problems.push(format!("{module}::{op} names unknown subcommand {sub}"));
        }
    }
    for n in names.iter().filter(|n| *n != "selftest") {
        if !COVERAGE.iter().any(|&(_, _, s)| s == n) {
            problems.push(format!("subcommand {n} exposes no operation"));
        }
    }
    problems
}

type Suite = fn(&mut ChaCha8Rng) -> Result<usize, String>;

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let suites: [(&str, Suite); 7] = [
        ("padic", padic_suite),
        ("weierstrass", weierstrass_suite),
        ("newton", newton_suite),
        ("quotient", quotient_suite),
        ("rigidity", rigidity_suite),
        ("theta", theta_suite),
        ("pipeline", pipeline_suite),
    ];
    let mut out = format!("seed: {}\n", cfg.seed);
    let mut ok = true;
    for (i, (name, suite)) in suites.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        match suite(&mut rng) {
            Ok(n) => writeln!(out, "suite {name}: pass ({n} cases)")?,
            Err(e) => {
                ok = false;
                writeln!(out, "suite {name}: FAIL {e}")?;
            }
        }
    }
    let problems = coverage_audit();
    if problems.is_empty() {
        writeln!(out, "coverage: pass ({} operations)", COVERAGE.len())?;
    } else {
        ok = false;
        for p in problems {
            writeln!(out, "coverage: FAIL {p}")?;
        }
    }
    Ok(Outcome { report: out, ok })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn padic_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let cases = 30;
    for _ in 0..cases {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let a = loop {
            let a: i64 = rng.gen_range(1..10_000);
            if a % p as i64 != 0 {
                break a;
            }
        };
        let x = PadicNum::from_int(p, a, 30);
        let w = x.teichmuller().map_err(|e| e.to_string())?;
        check(w.pow(p).sub_ref(&w).is_zero(), || format!("ω({a})^p ≠ ω({a}) for p={p}"))?;
        let u = PadicNum::from_int(p, 1 + p as i64 * rng.gen_range(1..1000), 30);
        let v = PadicNum::from_int(p, 1 + p as i64 * rng.gen_range(1..1000), 30);
        let lhs = u.mul_ref(&v).log_one_unit().map_err(|e| e.to_string())?;
        let rhs = u.log_one_unit().and_then(|l| Ok(l.add_ref(&v.log_one_unit()?))).map_err(|e| e.to_string())?;
        check(lhs.sub_ref(&rhs).is_zero(), || format!("log is not additive at p={p}"))?;
    }
    Ok(cases)
}

fn weierstrass_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let cases = 40;
    for _ in 0..cases {
        let p = [3u64, 5][rng.gen_range(0..2)];
        let mut vals: Vec<i64> = (0..24).map(|_| rng.gen_range(-200..200)).collect();
        vals[rng.gen_range(0..24)] = 1;
        let f = LambdaSeries::from_ints(p, 20, &vals, 24);
        let w = weierstrass_prep(&f).map_err(|e| e.to_string())?;
        check(w.reconstruct() == f, || format!("reconstruction failed for {vals:?} at p={p}"))?;
    }
    Ok(cases)
}

fn newton_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let cases = 40;
    let prec = 60;
    for _ in 0..cases {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let one = PadicCyclo::one(p, 1, prec);
        let pi = PadicCyclo::zeta(p, 1, 1, prec).sub_ref(&one);
        let deg = rng.gen_range(1..=6);
        let mut poly = vec![one.clone()];
        let mut expect = Vec::new();
        for _ in 0..deg {
            let u = PadicNum::from_int(p, rng.gen_range(1..p as i64), prec);
            let e = rng.gen_range(0..4u32);
            let root = pi.pow(e as u64).scale(&u);
            expect.push(Valuation::frac(e as i64, p as i64 - 1));
            let mut next = vec![PadicCyclo::zero(p, 1, prec); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add_ref(c);
                next[i] = next[i].sub_ref(&c.mul_ref(&root));
            }
            poly = next;
        }
        expect.sort();
        let np = polygon(&poly).map_err(|e| e.to_string())?;
        check(root_valuations(&np) == expect, || format!("root valuations differ for degree {deg} at p={p}"))?;
    }
    Ok(cases)
}

fn random_cyclo(rng: &mut ChaCha8Rng, n: u64) -> CycloInt {
    let len = cmrig::arith::euler_phi(n) as usize;
    CycloInt::from_poly(n, (0..len).map(|_| rng.gen_range(-9..10)).collect())
}

fn quotient_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut cases = 0;
    for &(p, n, m) in &[(3u64, 3u32, 1u32), (3, 3, 2), (5, 2, 1)] {
        let q = p.pow(n);
        for _ in 0..10 {
            let (a, b) = (random_cyclo(rng, q), random_cyclo(rng, q));
            let r = |x: &CycloInt| quotient_reduce(x, p, n, m).map_err(|e| e.to_string());
            check(r(&a.mul_ref(&b))? == r(&a)?.mul_ref(&r(&b)?), || format!("product at ({p},{n},{m})"))?;
            check(r(&a.add_ref(&b))? == r(&a)?.add_ref(&r(&b)?), || format!("sum at ({p},{n},{m})"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn rigidity_suite(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let cases = 10;
    for _ in 0..cases {
        let p = [3u64, 5][rng.gen_range(0..2)];
        let terms = rng.gen_range(1..=3);
        let planted = ExponentialForm::new(
            p,
            (0..terms).map(|_| {
                let d = CycloInt::from_int(1, rng.gen_range(1..6) * if rng.gen_bool(0.5) { 1 } else { -1 });
                (d, PadicNum::from_int(p, rng.gen_range(0..p.pow(3) as i64), 30))
            }),
        );
        let tower: Vec<_> = (1..=3).map(|n| planted.samples(n)).collect();
        let rep = fit_bounded(&tower, 4).map_err(|e| e.to_string())?;
        let same = rep.form.len() == planted.len()
            && planted.terms().iter().all(|b| {
                rep.form.terms().iter().any(|a| a.coeff.value_eq(&b.coeff) && a.exp.congruent(&b.exp.truncate(3)))
            });
        check(rep.is_exact() && same, || format!("planted form not recovered at p={p}:\n{planted}"))?;
    }
    Ok(cases)
}

fn point_count_trace(l: i64) -> i64 {
    let affine: i64 = (0..l)
        .map(|x| {
            let rhs = (x * x % l * x - x).rem_euclid(l);
            (0..l).filter(|y| y * y % l == rhs).count() as i64
        })
        .sum();
    l - affine
}

fn theta_suite(_: &mut ChaCha8Rng) -> Result<usize, String> {
    let psi = HeckeCharData::canonical(4).map_err(|e| e.to_string())?;
    let f = theta_build(&psi, 5, 100).map_err(|e| e.to_string())?;
    let mut cases = 0;
    for l in (3..100).filter(|&l| is_prime(l)) {
        let want = CycloInt::from_int(1, point_count_trace(l as i64));
        check(f.coeff(l).is_some_and(|a| a.value_eq(&want)), || format!("a_{l} disagrees with the point count"))?;
        cases += 1;
    }
    check(f.multiplicativity_failures(100).is_empty(), || "multiplicativity".into())?;
    check(f.recurrence_failures(100).is_empty(), || "Hecke recurrence".into())?;
    Ok(cases)
}

fn pipeline_suite(_: &mut ChaCha8Rng) -> Result<usize, String> {
    let psi = HeckeCharData::canonical(4).map_err(|e| e.to_string())?;
    let cfg = PipelineConfig {
        place: cmrig::modforms::Place::new(5, 1).map_err(|e| e.to_string())?,
        levels: vec![1, 2],
        k_target: 2,
        prec: 40,
    };
    let rep = pipeline_run(&psi, &[13, 17], &cfg).map_err(|e| e.to_string())?;
    check(rep.all_weil(), || "Weil check failed".into())?;
    Ok(rep.primes.len())
}
