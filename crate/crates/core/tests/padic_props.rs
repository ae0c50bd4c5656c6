use num_rational::Ratio;
use proptest::prelude::*;

use cmrig::arith::euler_phi;
use cmrig::padic::{PadicCyclo, PadicNum, Valuation};

const N: i64 = 30;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn padic(p: u64) -> impl Strategy<Value = PadicNum> {
    (-1_000_000i64..1_000_000, 0i64..4).prop_map(move |(n, s)| PadicNum::from_int(p, n, N).shift_by(s))
}

fn cyclo(p: u64, level: u32) -> impl Strategy<Value = PadicCyclo> {
    let dim = euler_phi(p.pow(level)) as usize;
    (prop::collection::vec(-500i64..500, dim), 0i64..3).prop_map(move |(c, s)| {
        let coords = c.into_iter().map(|v| PadicNum::from_int(p, v, N).shift_by(s)).collect();
        PadicCyclo::from_coords(p, level, coords)
    })
}

fn triple() -> impl Strategy<Value = (PadicNum, PadicNum, PadicNum)> {
    prime().prop_flat_map(|p| (padic(p), padic(p), padic(p)))
}

fn cyclo_pair() -> impl Strategy<Value = (PadicCyclo, PadicCyclo)> {
    (prime(), 1u32..3).prop_flat_map(|(p, r)| (cyclo(p, r), cyclo(p, r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_laws((a, b, c) in triple()) {
        prop_assert!(a.mul_ref(&b).mul_ref(&c).congruent(&a.mul_ref(&b.mul_ref(&c))));
        prop_assert!(a.add_ref(&b).add_ref(&c).congruent(&a.add_ref(&b.add_ref(&c))));
        let lhs = a.mul_ref(&b.add_ref(&c));
        let rhs = a.mul_ref(&b).add_ref(&a.mul_ref(&c));
        prop_assert!(lhs.congruent(&rhs));
        prop_assert!(a.sub_ref(&a).is_zero());
    }

    #[test]
    fn cyclo_ring_laws((a, b) in cyclo_pair()) {
        let lhs = a.add_ref(&b).mul_ref(&a);
        let rhs = a.mul_ref(&a).add_ref(&b.mul_ref(&a));
        prop_assert!(lhs.sub_ref(&rhs).is_zero());
        prop_assert!(a.mul_ref(&b).sub_ref(&b.mul_ref(&a)).is_zero());
    }

    #[test]
    fn valuation_is_additive_and_ultrametric((a, b) in cyclo_pair()) {
        let (Valuation::Finite(va), Valuation::Finite(vb)) = (a.ord(), b.ord()) else {
            return Ok(());
        };
        prop_assert_eq!(a.mul_ref(&b).ord(), Valuation::Finite(va + vb));
        let sum = a.add_ref(&b).ord();
        let low = va.min(vb);
        match sum {
            Valuation::Finite(v) => {
                prop_assert!(v >= low);
                if va != vb {
                    prop_assert_eq!(v, low);
                }
            }
            Valuation::Infinite { .. } => prop_assert_eq!(va, vb),
        }
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(p in prime(), n in 1i64..1_000_000) {
        prop_assume!(n % p as i64 != 0);
        let x = PadicNum::from_int(p, n, N);
        let w = x.teichmuller().unwrap();
        prop_assert!(w.pow(p - 1).congruent(&PadicNum::one(p, N)));
        prop_assert_eq!(w.residue(), x.residue());
    }

    #[test]
    fn log_is_a_homomorphism(p in prime(), a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let unit = |v: i64| PadicNum::from_int(p, 1 + p as i64 * v, N);
        let (x, y) = (unit(a), unit(b));
        let lhs = x.mul_ref(&y).log_one_unit().unwrap();
        let rhs = x.log_one_unit().unwrap().add_ref(&y.log_one_unit().unwrap());
        prop_assert!(lhs.congruent(&rhs));
    }
}

#[test]
fn zeta_minus_one_has_valuation_one_over_phi() {
    for (p, top) in [(2u64, 4u32), (3, 4), (5, 3), (7, 2)] {
        for r in 1..=top {
            let t = PadicCyclo::zeta(p, r, 1, 20).sub_ref(&PadicCyclo::one(p, r, 20));
            let phi = euler_phi(p.pow(r)) as i64;
            assert_eq!(t.ord(), Valuation::Finite(Ratio::new(1, phi)), "p={p} r={r}");
        }
    }
}
