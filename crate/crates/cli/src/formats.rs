//! Input file formats that are specific to the command line.

use anyhow::{anyhow, bail, ensure, Context, Result};
use num_bigint::BigInt;

use cmrig::cyclo::{parse_cyclo_int, CycloInt, QuadCycloNum, RootOfUnity};
use cmrig::lambda::LambdaSeries;
use cmrig::modforms::FrobeniusPair;
use cmrig::padic::{text, PadicCyclo, PadicNum};
use cmrig::rigidity::{ExponentialForm, SampleSet};

fn content_lines(src: &str) -> impl Iterator<Item = &str> {
    src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// The level r with `p^r` equal to the conductor of `x`.
pub fn p_level(x: &CycloInt, p: u64) -> Result<u32> {
    let mut n = x.conductor();
    let mut r = 0;
    while n.is_multiple_of(p) {
        n /= p;
        r += 1;
    }
    ensure!(n == 1, "conductor {} is not a power of {p}", x.conductor());
    Ok(r)
}

/// A cyclotomic integer of p-power conductor viewed in Z_p[ζ_{p^r}].
pub fn padic_cyclo(x: &CycloInt, p: u64, level: u32, prec: i64) -> Result<PadicCyclo> {
    let own = p_level(x, p)?;
    ensure!(own <= level, "element of level {own} does not fit in level {level}");
    let coeffs: Vec<BigInt> = x.coeffs().iter().map(|&c| BigInt::from(c)).collect();
    Ok(PadicCyclo::from_int_poly(p, own, &coeffs, prec).embed(level)?)
}

/// A polynomial file: header `p N`, then one CycloInt coefficient per line,
/// constant term first.
pub fn parse_poly(src: &str) -> Result<Vec<PadicCyclo>> {
    let mut lines = content_lines(src);
    let header = lines.next().ok_or_else(|| anyhow!("empty polynomial file"))?;
    let (p, prec) = parse_pair::<u64, i64>(header).context("header must be `p N`")?;
    let coeffs: Vec<CycloInt> = lines.map(|l| parse_cyclo_int(l).map_err(Into::into)).collect::<Result<_>>()?;
    ensure!(!coeffs.is_empty(), "polynomial has no coefficients");
    let level = coeffs.iter().map(|c| p_level(c, p)).collect::<Result<Vec<_>>>()?;
    let level = level.into_iter().max().unwrap_or(0);
    coeffs.iter().map(|c| padic_cyclo(c, p, level, prec)).collect()
}

/// A probe file: header `p N L`, then one line per power of X, constant term
/// first, holding the comma-separated base-p digit strings of its T-coefficients.
pub fn parse_probe(src: &str) -> Result<Vec<LambdaSeries>> {
    let mut lines = content_lines(src);
    let header = lines.next().ok_or_else(|| anyhow!("empty probe file"))?;
    let h: Vec<i64> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| anyhow!("bad header {header:?}")))
        .collect::<Result<_>>()?;
    let [p, prec, len] = h[..] else {
        bail!("header must be `p N L`");
    };
    ensure!(len > 0, "truncation must be positive");
    let p = p as u64;
    let mut out = Vec::new();
    for line in lines {
        let mut coeffs = line
            .split(',')
            .map(|d| text::parse(&format!("…({})_{p} + O({p}^{prec})", d.trim())))
            .collect::<Result<Vec<PadicNum>, _>>()?;
        ensure!(coeffs.len() <= len as usize, "more than L = {len} coefficients in {line:?}");
        coeffs.resize(len as usize, PadicNum::zero(p, prec));
        out.push(LambdaSeries::new(p, prec, coeffs));
    }
    ensure!(!out.is_empty(), "probe polynomial has no coefficients");
    Ok(out)
}

/// Consecutive sample sets, each starting at its `p n xi=…` header.
pub fn parse_tower(src: &str) -> Result<Vec<SampleSet>> {
    let mut blocks: Vec<String> = Vec::new();
    for line in content_lines(src) {
        if line.contains("xi=") {
            blocks.push(String::new());
        }
        let block = blocks.last_mut().ok_or_else(|| anyhow!("sample file must start with a header"))?;
        block.push_str(line);
        block.push('\n');
    }
    ensure!(!blocks.is_empty(), "no sample sets found");
    blocks.iter().map(|b| SampleSet::parse_text(b).map_err(Into::into)).collect()
}

/// Input to `cramer`: a form file followed by one
/// `sample: zeta=<order>:<exp> value=<QuadCycloNum>` line per term.
pub fn parse_cramer(src: &str) -> Result<(ExponentialForm, Vec<(RootOfUnity, QuadCycloNum)>)> {
    let mut form = String::new();
    let mut samples = Vec::new();
    for line in content_lines(src) {
        let Some(rest) = line.strip_prefix("sample:") else {
            form.push_str(line);
            form.push('\n');
            continue;
        };
        let rest = rest.trim().strip_prefix("zeta=").ok_or_else(|| anyhow!("sample line needs zeta="))?;
        let (z, v) = rest.split_once(" value=").ok_or_else(|| anyhow!("sample line needs value="))?;
        samples.push((parse_root(z)?, QuadCycloNum::parse(v.trim())?));
    }
    Ok((ExponentialForm::parse_text(&form)?, samples))
}

/// Frobenius pair file: header `ell=<ℓ> base=<n>`, then
/// `pair: <QuadCycloNum> | <QuadCycloNum>` lines.
pub fn parse_pairs(src: &str) -> Result<(Vec<FrobeniusPair>, u64)> {
    let mut lines = content_lines(src);
    let header = lines.next().ok_or_else(|| anyhow!("empty pair file"))?;
    let mut ell = None;
    let mut base = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("ell", v)) => ell = Some(v.parse::<u64>()?),
            Some(("base", v)) => base = Some(v.parse::<u64>()?),
            _ => bail!("unexpected header field {tok:?}"),
        }
    }
    let ell = ell.ok_or_else(|| anyhow!("header needs ell="))?;
    let base = base.unwrap_or(1);
    let mut pairs = Vec::new();
    for line in lines {
        let body = line.strip_prefix("pair:").ok_or_else(|| anyhow!("expected `pair:` line"))?;
        let (a, b) = body.split_once('|').ok_or_else(|| anyhow!("pair needs two roots separated by `|`"))?;
        pairs.push(FrobeniusPair::new(ell, QuadCycloNum::parse(a.trim())?, QuadCycloNum::parse(b.trim())?));
    }
    ensure!(!pairs.is_empty(), "no pairs given");
    Ok((pairs, base))
}

/// `<order>:<exp>`.
pub fn parse_root(s: &str) -> Result<RootOfUnity> {
    let (o, e) = s.trim().split_once(':').ok_or_else(|| anyhow!("root of unity must be `<order>:<exp>`"))?;
    let o: u64 = o.parse()?;
    ensure!(o > 0, "root of unity order must be positive");
    Ok(RootOfUnity::new(o, e.parse()?))
}

/// A p-adic literal `…(digits)_p + O(p^N)` or a plain integer.
pub fn parse_padic(s: &str, p: u64, prec: i64) -> Result<PadicNum> {
    if s.contains(")_") {
        let x = text::parse(s)?;
        ensure!(x.p() == p, "literal is {}-adic, expected {p}-adic", x.p());
        return Ok(x);
    }
    let v: BigInt = s.trim().parse().with_context(|| format!("bad p-adic value {s:?}"))?;
    Ok(PadicNum::from_int(p, v, prec))
}

fn parse_pair<A: std::str::FromStr, B: std::str::FromStr>(s: &str) -> Result<(A, B)> {
    let mut it = s.split_whitespace();
    let a = it.next().and_then(|t| t.parse().ok());
    let b = it.next().and_then(|t| t.parse().ok());
    match (a, b, it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => bail!("expected two fields in {s:?}"),
    }
}
