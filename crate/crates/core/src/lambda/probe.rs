use std::collections::BTreeSet;

use super::{eval_small, LambdaError, LambdaSeries};
use crate::newton;
use crate::padic::PadicCyclo;

/// Vertex index sets of the Newton polygons of `R(t, X)` for each probe point.
///
/// `r` lists the coefficients of `X^0, X^1, …` as series in T; the last one
/// must evaluate to a unit.
pub fn stable_polygon_probe(r: &[LambdaSeries], points: &[PadicCyclo]) -> Result<Vec<BTreeSet<usize>>, LambdaError> {
    points
        .iter()
        .map(|t| {
            let coeffs = r.iter().map(|c| eval_small(c, t).map(|e| e.value)).collect::<Result<Vec<_>, _>>()?;
            Ok(newton::polygon(&coeffs)?.vertex_indices())
        })
        .collect()
}
