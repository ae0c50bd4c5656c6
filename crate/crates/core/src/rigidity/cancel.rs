use std::collections::BTreeMap;
use std::fmt;

use super::fit::fourier;
use super::form::is_primitive_exponent;
use super::{RigidityError, SampleSet};
use crate::cyclo::{quotient_reduce, CycloError, TruncPoly};

/// How the Fourier terms of one sample behave in F_p[y]/(y^{p^m} − 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationPattern {
    /// The sample exponent `a`, with `ζ = ζ_{p^n}^a` primitive.
    pub a: u64,
    /// Image of the sample value.
    pub image: TruncPoly,
    /// Groups of exponent residues that land on the same power of `y`.
    pub collisions: Vec<Vec<u64>>,
    /// Groups whose combined image vanishes.
    pub zero_sums: Vec<Vec<u64>>,
    /// Residues whose coefficient alone maps to zero.
    pub vanishing: Vec<u64>,
    /// Whether the whole sample maps to zero.
    pub total: bool,
}

impl CancellationPattern {
    pub fn is_clean(&self) -> bool {
        self.collisions.is_empty() && self.zero_sums.is_empty() && self.vanishing.is_empty() && !self.total
    }
}

fn groups(v: &[Vec<u64>]) -> String {
    let g: Vec<String> = v
        .iter()
        .map(|x| x.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))
        .map(|s| format!("{{{s}}}"))
        .collect();
    g.join(" ")
}

impl fmt::Display for CancellationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let van: Vec<String> = self.vanishing.iter().map(|r| r.to_string()).collect();
        write!(
            f,
            "a={} image={} total={} collisions=[{}] zero_sums=[{}] vanishing=[{}]",
            self.a,
            self.image,
            self.total,
            groups(&self.collisions),
            groups(&self.zero_sums),
            van.join(",")
        )
    }
}

/// Reduce every primitive sample modulo `ζ^{p^m} − 1` and classify the
/// cancellation among its Fourier terms: coefficients that vanish, groups of
/// terms whose exponents collide, and groups whose images sum to zero.
///
/// Sample values must lie in Z[ζ_{p^n}].
pub fn cancellation_probe(h: &SampleSet, m: u32) -> Result<Vec<CancellationPattern>, RigidityError> {
    let p = h.p();
    let n = h.level();
    if m >= n {
        return Err(CycloError::LevelError { m, n }.into());
    }
    let q = p.pow(n);
    let qm = p.pow(m);
    let terms = fourier(h)?;
    let mut out = Vec::new();
    for a in (0..q).filter(|&a| is_primitive_exponent(a, p)) {
        let image = quotient_reduce(h.value(a), p, n, m)?;
        let mut classes: BTreeMap<u64, Vec<(u64, TruncPoly)>> = BTreeMap::new();
        let mut vanishing = Vec::new();
        for (r, c) in &terms {
            let ci = quotient_reduce(c, p, n, m)?;
            if ci.is_zero() {
                vanishing.push(*r);
            }
            let slot = a * r % qm;
            let shifted = ci.mul_ref(&TruncPoly::monomial(p, m, slot, 1));
            classes.entry(slot).or_default().push((*r, shifted));
        }
        let mut collisions = Vec::new();
        let mut zero_sums = Vec::new();
        for members in classes.values() {
            let rs: Vec<u64> = members.iter().map(|(r, _)| *r).collect();
            if rs.len() > 1 {
                collisions.push(rs.clone());
            }
            let sum = members.iter().fold(TruncPoly::zero(p, m), |acc, (_, x)| acc.add_ref(x));
            if sum.is_zero() && !(rs.len() == 1 && vanishing.contains(&rs[0])) {
                zero_sums.push(rs);
            }
        }
        out.push(CancellationPattern { a, total: image.is_zero(), image, collisions, zero_sums, vanishing });
    }
    Ok(out)
}
