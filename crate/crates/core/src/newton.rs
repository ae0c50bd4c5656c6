//! Newton polygons of polynomials over the p-adic cyclotomic rings.
//!
//! Points are plotted as `(d − i, ord a_i)`, so a segment of slope `m` and
//! horizontal length `ℓ` corresponds to `ℓ` roots of valuation `m`.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::padic::{PadicCyclo, PadicNum, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("leading coefficient is not a unit")]
    NotMonic,
    #[error("empty polynomial")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slope {
    Finite(Ratio<i64>),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) => write!(f, "{r}"),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Slope,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    degree: usize,
    points: Vec<(i64, Valuation)>,
    vertices: Vec<(i64, Ratio<i64>)>,
    segments: Vec<Segment>,
    zero_root_bound: Option<Valuation>,
    flagged: Vec<usize>,
}

impl NewtonPolygon {
    /// Build from the valuations of `a_0, …, a_d` (constant term first).
    pub fn from_valuations(vals: &[Valuation]) -> Result<Self, NewtonError> {
        let d = vals.len().checked_sub(1).ok_or(NewtonError::Empty)?;
        if vals[d] != Valuation::int(0) {
            return Err(NewtonError::NotMonic);
        }
        let points: Vec<(i64, Valuation)> = vals.iter().enumerate().map(|(i, v)| ((d - i) as i64, *v)).collect();
        let flagged: Vec<usize> = (0..=d).filter(|&i| !vals[i].is_finite()).collect();
        let mut finite: Vec<(i64, Ratio<i64>)> =
            points.iter().filter_map(|(x, v)| v.finite().map(|y| (*x, y))).collect();
        finite.sort();

        let mut hull: Vec<(i64, Ratio<i64>)> = Vec::new();
        for pt in finite {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if slope(a, b) >= slope(b, pt) {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }

        let mut segments: Vec<Segment> = hull
            .windows(2)
            .map(|w| Segment { slope: Slope::Finite(slope(w[0], w[1])), length: (w[1].0 - w[0].0) as usize })
            .collect();
        let zero_mult = vals.iter().take_while(|v| !v.is_finite()).count();
        let zero_root_bound = if zero_mult > 0 {
            segments.push(Segment { slope: Slope::Infinite, length: zero_mult });
            Some(vals[0])
        } else {
            None
        };
        Ok(NewtonPolygon { degree: d, points, vertices: hull, segments, zero_root_bound, flagged })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[(i64, Valuation)] {
        &self.points
    }

    pub fn vertices(&self) -> &[(i64, Ratio<i64>)] {
        &self.vertices
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Coefficient indices that vanish at working precision.
    pub fn flagged(&self) -> &[usize] {
        &self.flagged
    }

    /// Indices `i` of the coefficients `a_i` sitting at hull vertices.
    pub fn vertex_indices(&self) -> BTreeSet<usize> {
        self.vertices.iter().map(|(x, _)| self.degree - *x as usize).collect()
    }
}

fn slope(a: (i64, Ratio<i64>), b: (i64, Ratio<i64>)) -> Ratio<i64> {
    (b.1 - a.1) / (b.0 - a.0)
}

/// Newton polygon of a polynomial with p-adic cyclotomic coefficients.
pub fn polygon(coeffs: &[PadicCyclo]) -> Result<NewtonPolygon, NewtonError> {
    let vals: Vec<Valuation> = coeffs.iter().map(PadicCyclo::ord).collect();
    NewtonPolygon::from_valuations(&vals)
}

/// Newton polygon of a polynomial over Q_p.
pub fn polygon_padic(coeffs: &[PadicNum]) -> Result<NewtonPolygon, NewtonError> {
    let vals: Vec<Valuation> = coeffs.iter().map(PadicNum::ord).collect();
    NewtonPolygon::from_valuations(&vals)
}

/// Root valuations read from the slopes, sorted ascending with multiplicity.
pub fn root_valuations(np: &NewtonPolygon) -> Vec<Valuation> {
    np.segments
        .iter()
        .flat_map(|s| {
            let v = match s.slope {
                Slope::Finite(m) => Valuation::Finite(m),
                Slope::Infinite => np.zero_root_bound.unwrap_or(Valuation::infinite(0)),
            };
            std::iter::repeat_n(v, s.length)
        })
        .collect()
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
        let segs: Vec<String> = self.segments.iter().map(|s| format!("{}×{}", s.slope, s.length)).collect();
        writeln!(f, "vertices: {}", verts.join(" "))?;
        write!(f, "segments: {}", segs.join(" "))?;
        if !self.flagged.is_empty() {
            let idx: Vec<String> = self.flagged.iter().map(|i| i.to_string()).collect();
            write!(f, "\nzero-at-precision: {}", idx.join(","))?;
        }
        Ok(())
    }
}
