use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_rational::Ratio;

/// A p-adic valuation: an exact rational, or `+∞` for an element that is
/// zero at the working precision. The infinite case remembers that
/// precision so a vanishing result is never mistaken for an exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite { at_precision: Ratio<i64> },
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Ratio::from_integer(v))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Valuation::Finite(Ratio::new(n, d))
    }

    pub fn infinite(at_precision: i64) -> Self {
        Valuation::Infinite { at_precision: Ratio::from_integer(at_precision) }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(r) => Some(*r),
            Valuation::Infinite { .. } => None,
        }
    }

    /// Scale a valuation by a positive integer (used for powers).
    pub fn scale(&self, k: i64) -> Self {
        match self {
            Valuation::Finite(r) => Valuation::Finite(*r * k),
            Valuation::Infinite { at_precision } => Valuation::Infinite { at_precision: *at_precision },
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite { .. }) => Ordering::Less,
            (Valuation::Infinite { .. }, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite { at_precision: a }, Valuation::Infinite { at_precision: b }) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            (Valuation::Finite(a), Valuation::Infinite { at_precision })
            | (Valuation::Infinite { at_precision }, Valuation::Finite(a)) => {
                Valuation::Infinite { at_precision: at_precision + a }
            }
            (Valuation::Infinite { at_precision: a }, Valuation::Infinite { at_precision: b }) => {
                Valuation::Infinite { at_precision: a + b }
            }
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{}", r),
            Valuation::Infinite { at_precision } => write!(f, "+inf (at precision {})", at_precision),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_puts_infinity_last() {
        let mut v = [Valuation::infinite(40), Valuation::frac(1, 6), Valuation::int(2), Valuation::frac(1, 2)];
        v.sort();
        assert_eq!(v[0], Valuation::frac(1, 6));
        assert!(!v[3].is_finite());
    }

    #[test]
    fn reduced_fractions() {
        assert_eq!(Valuation::frac(2, 12), Valuation::frac(1, 6));
        assert_eq!(Valuation::frac(1, 2) + Valuation::frac(1, 3), Valuation::frac(5, 6));
    }
}
