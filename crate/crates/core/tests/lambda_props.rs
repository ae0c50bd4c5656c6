use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use cmrig::arith::euler_phi;
use cmrig::lambda::{eval_small, specialize, stable_polygon_probe, weierstrass_prep, LambdaSeries, SpecPoint};
use cmrig::padic::{PadicCyclo, PadicNum};

const N: i64 = 30;
const L: usize = 64;

fn series(p: u64) -> impl Strategy<Value = LambdaSeries> {
    prop::collection::vec(-10_000i64..10_000, L).prop_map(move |c| LambdaSeries::from_ints(p, N, &c, L))
}

fn any_series() -> impl Strategy<Value = LambdaSeries> {
    prop::sample::select(vec![3u64, 5, 7]).prop_flat_map(series)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preparation_round_trips(f in any_series()) {
        prop_assume!(!f.is_zero());
        let w = weierstrass_prep(&f).unwrap();
        prop_assert_eq!(w.reconstruct(), f);
        prop_assert!(w.f.last().unwrap().congruent(&PadicNum::one(w.u.p(), N)));
        prop_assert!(w.u.coeff(0).is_unit());
    }

    #[test]
    fn preparation_of_p_multiple_raises_k(f in any_series()) {
        prop_assume!(!f.is_zero());
        let p = f.p();
        let w = weierstrass_prep(&f).unwrap();
        let scaled = f.scale(&PadicNum::from_int(p, p, N + 1));
        let w2 = weierstrass_prep(&scaled).unwrap();
        prop_assert_eq!(w2.k, w.k + 1);
        prop_assert_eq!(w2.degree(), w.degree());
    }

    #[test]
    fn binomial_series_multiply(p in prop::sample::select(vec![3u64, 5]), a in -500i64..500, b in -500i64..500) {
        let e = |v: i64| PadicNum::from_int(p, v, N);
        let lhs = LambdaSeries::binomial(&e(a), L, N).unwrap().mul_ref(&LambdaSeries::binomial(&e(b), L, N).unwrap());
        let rhs = LambdaSeries::binomial(&e(a + b), L, N).unwrap();
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!(x.congruent(y));
        }
    }

    #[test]
    fn binomial_specializes_to_a_root_of_unity(
        (p, r) in prop::sample::select(vec![(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)]),
        e in 0i64..1_000_000,
        a in 1u64..1000,
    ) {
        prop_assume!(a % p != 0);
        // Enough terms that the discarded tail vanishes modulo p^10.
        let len = 10 * euler_phi(p.pow(r)) as usize;
        let f = LambdaSeries::binomial_int(p, &BigInt::from(e), len, N);
        let point = SpecPoint::new(1, r, a, p).unwrap();
        let v = specialize(&f, &point).unwrap().value;
        let want = PadicCyclo::zeta(p, r, (a as i64) * e, N);
        prop_assert!(v.abs_prec() >= 10);
        prop_assert!(v.sub_ref(&want).is_zero());
    }
}

/// `R(T, X) = X² + c₁(T)·X + c₀(T)` with `c₀ = p·u₀ + T·w` and `c₁ = T^j·u₁`.
/// Once `ord t` is below the thresholds from the Weierstrass data of `c₀`
/// and `c₁`, the vertex indices no longer move.
#[test]
fn probe_vertex_sets_stabilize() {
    let p = 3;
    let cases: [(&[i64], &[i64]); 3] = [(&[3, 1], &[0, 0, 1]), (&[9, 0, 1], &[0, 2]), (&[3, 0, 0, 1], &[1])];
    for (c0, c1) in cases {
        let r = vec![
            LambdaSeries::from_ints(p, N, c0, 2 * L),
            LambdaSeries::from_ints(p, N, c1, 2 * L),
            LambdaSeries::one(p, N, 2 * L),
        ];
        let points: Vec<PadicCyclo> =
            (2..=4).map(|level| PadicCyclo::zeta(p, level, 1, N).sub_ref(&PadicCyclo::one(p, level, N))).collect();
        let sets = stable_polygon_probe(&r, &points).unwrap();
        let distinct: BTreeSet<_> = sets.iter().collect();
        assert_eq!(distinct.len(), 1, "{c0:?} {c1:?}: {sets:?}");
        for t in &points {
            assert!(eval_small(&r[2], t).unwrap().value.coords()[0].is_unit());
        }
    }
}
