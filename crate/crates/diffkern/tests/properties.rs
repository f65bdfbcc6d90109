//! Randomized invariants: algebraic laws and round trips that must hold on
//! every input, exercised over generated cases.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use diffkern::abelian::{count_at_level, ec_point_count, CurveGroup, EllipticCurve};
use diffkern::additive::{ore_mul, ore_rdivmod, TwistedPoly};
use diffkern::arith::{int_poly_factor, real_root_count, IntPolynomial};
use diffkern::ff::{field_create, frobenius_apply};
use diffkern::padic::{ladic_exp, ladic_log, unit_dlog, DlogResult, LAdicContext};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_expand_roundtrip(coeffs in prop::collection::vec(-9i64..=9, 1..=6)) {
        let f = IntPolynomial::from_i64(&coeffs);
        prop_assume!(!f.is_zero());
        let factored = int_poly_factor(&f).unwrap();
        prop_assert_eq!(factored.expand(), f);
    }

    #[test]
    fn sturm_counts_linear_roots(a in -20i64..=20, b in -20i64..=20) {
        // (T - a)(T - b)(T^2 + 1) has exactly the real roots {a, b}
        let f = IntPolynomial::from_i64(&[-a, 1])
            .mul(&IntPolynomial::from_i64(&[-b, 1]))
            .mul(&IntPolynomial::from_i64(&[1, 0, 1]));
        let expected = if a == b { 1 } else { 2 };
        prop_assert_eq!(real_root_count(&f).unwrap(), expected);
    }

    #[test]
    fn ladic_exp_log_roundtrip(ell_ix in 0usize..3, r in 1u64..u64::MAX) {
        let ell = [3u64, 5, 7][ell_ix];
        let ctx = LAdicContext::new(ell, 12).unwrap();
        let u_val = (BigUint::one() + BigUint::from(ell) * BigUint::from(r)) % ctx.modulus();
        let u = ctx.unit(&BigInt::from(u_val)).unwrap();
        let x = ladic_log(&u).unwrap();
        prop_assert_eq!(ladic_exp(&ctx, &x).unwrap().value, u.value);
    }

    #[test]
    fn dlog_recovers_exponent(t in 0u64..1_000_000) {
        let ctx = LAdicContext::new(3, 10).unwrap();
        let base = ctx.unit(&BigInt::from(2)).unwrap();
        let val = BigUint::from(2u32).modpow(&BigUint::from(t), &ctx.modulus());
        let target = ctx.unit(&BigInt::from(val)).unwrap();
        match unit_dlog(&base, &target).unwrap() {
            DlogResult::Found { t: found, modulus } => {
                prop_assert_eq!(BigUint::from(t) % modulus, found);
            }
            DlogResult::NotInSubgroup => prop_assert!(false, "power of base must lie in <base>"),
        }
    }

    #[test]
    fn field_laws_hold(p_ix in 0usize..4, m in 1u32..=3, seed in any::<u64>()) {
        let p = [2u64, 3, 5, 7][p_ix];
        let f = field_create(p, m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_elem(&mut rng);
        let b = f.random_elem(&mut rng);
        let c = f.random_elem(&mut rng);
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        // Frobenius is additive and multiplicative
        prop_assert_eq!(frobenius_apply(&a.add(&b), 1), frobenius_apply(&a, 1).add(&frobenius_apply(&b, 1)));
        prop_assert_eq!(frobenius_apply(&a.mul(&b), 1), frobenius_apply(&a, 1).mul(&frobenius_apply(&b, 1)));
    }

    #[test]
    fn ore_division_identity(seed in any::<u64>(), da in 0usize..4, db in 0usize..3) {
        let f = field_create(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = TwistedPoly::new(&f, (0..=da).map(|_| f.random_elem(&mut rng)).collect());
        let b = TwistedPoly::new(&f, (0..=db).map(|_| f.random_elem(&mut rng)).collect());
        prop_assume!(!b.is_zero());
        let (q, r) = ore_rdivmod(&a, &b).unwrap();
        prop_assert_eq!(ore_mul(&q, &b).add(&r), a);
        prop_assert!(r.deg().map_or(true, |d| d < b.deg().unwrap()));
    }

    #[test]
    fn curve_group_laws(a4 in 0i64..7, a6 in 1i64..7, seed in any::<u64>()) {
        let e = match EllipticCurve::short(7, a4, a6) {
            Ok(e) => e,
            Err(_) => return Ok(()), // singular coefficients
        };
        let f = field_create(7, 2).unwrap();
        let g = CurveGroup::new(&e, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = g.random_point(&mut rng);
        let q = g.random_point(&mut rng);
        let r = g.random_point(&mut rng);
        prop_assert_eq!(g.add(&g.add(&p, &q), &r), g.add(&p, &g.add(&q, &r)));
        prop_assert!(g.add(&p, &g.neg(&p)).is_none());
        let n = BigInt::from(g.count_points().unwrap());
        prop_assert!(g.scalar_mul(&n, &p).is_none());
    }

    #[test]
    fn trace_matches_first_count(a4 in 0u64..5, a6 in 0u64..5) {
        let e = match EllipticCurve::new(5, 0, 0, 0, a4, a6) {
            Ok(e) => e,
            Err(_) => return Ok(()),
        };
        let n1 = ec_point_count(&e).unwrap();
        let trace = 5 + 1 - n1 as i64;
        prop_assert_eq!(count_at_level(trace, 5, 1), BigInt::from(n1));
    }
}
