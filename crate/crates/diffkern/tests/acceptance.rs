//! End-to-end acceptance suite: one line of output per criterion.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use diffkern::abelian::{
    av_witness_search, av_witness_verify, classify_obstruction, count_at_level, ec_point_count,
    frobenius_data, mult_rank, CurveGroup, EllipticCurve, ObstructionBranch, RankMethod,
};
use diffkern::additive::{additive_kernel, ga_difference_kernel, ore_mul, ore_rdivmod, TwistedPoly};
use diffkern::arith::intfact::is_prime_u64;
use diffkern::arith::{int_poly_factor, IntPolynomial};
use diffkern::ff::{field_create, FieldCtx};
use diffkern::gm::{artin_density_scan, gm_verify_certificate, gm_witness_search};
use diffkern::padic::{ladic_exp, ladic_log, unit_dlog, DlogResult, LAdicContext};
use diffkern::weil::classify_modular;
use diffkern::witt::{galois_ring_create, witt_kernel, witt_split_analyze};

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

/// Exact |a| = p^j test; being integer-exact it subsumes any fixed-precision
/// numeric oracle for the (linear) root a.
fn oracle_linear_is_weil(a: i64, p: u64) -> bool {
    let target = BigUint::from(a.unsigned_abs());
    let mut pw = BigUint::one();
    while pw <= target {
        if pw == target {
            return true;
        }
        pw *= BigUint::from(p);
    }
    false
}

fn criterion1() -> Result<(), String> {
    // T - p is never modular
    for p in (2..=50).filter(|&p| is_prime_u64(p)) {
        let rep = classify_modular(&poly(&[-(p as i64), 1]), p).map_err(|e| e.to_string())?;
        ensure!(!rep.is_modular, "T - {p} must not be modular");
    }
    // every counted curve charpoly over F_5 is non-modular
    for a4 in 0..5i64 {
        for a6 in 0..5i64 {
            let e = match EllipticCurve::short(5, a4, a6) {
                Ok(e) => e,
                Err(_) => continue, // singular
            };
            let a = 5 + 1 - ec_point_count(&e).map_err(|e| e.to_string())? as i64;
            let rep = classify_modular(&poly(&[5, -a, 1]), 5).map_err(|e| e.to_string())?;
            ensure!(!rep.is_modular, "curve charpoly a={a} must not be modular");
        }
    }
    // every divisor of T^n - 1, n <= 20
    for n in 1..=20usize 	{
        let mut tn = IntPolynomial::monomial(BigInt::one(), n);
        tn = tn.sub(&IntPolynomial::one());
        let factors = int_poly_factor(&tn).map_err(|e| e.to_string())?.factors;
        let k = factors.len();
        for mask in 1u32..(1 << k) {
            let mut prod = IntPolynomial::one();
            for (i, (f, _)) in factors.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    prod = prod.mul(f);
                }
            }
            let rep = classify_modular(&prod, 7).map_err(|e| e.to_string())?;
            ensure!(!rep.is_modular, "divisor of T^{n} - 1 must not be modular");
        }
    }
    // T - a modular exactly when |a| is not 1 and not a p-power
    for p in [2u64, 3, 5] {
        for a in (-100i64..=100).filter(|&a| a != 0) {
            let rep = classify_modular(&poly(&[-a, 1]), p).map_err(|e| e.to_string())?;
            let oracle = oracle_linear_is_weil(a, p);
            ensure!(
                rep.is_modular == !oracle,
                "T - ({a}) at p = {p}: exact {} vs oracle weil {}",
                rep.is_modular,
                oracle
            );
        }
    }
    Ok(())
}

fn criterion2() -> Result<(), String> {
    let cert = gm_witness_search(2, 5, 2).map_err(|e| e.to_string())?;
    let cert = gm_verify_certificate(&cert).map_err(|e| e.to_string())?;
    ensure!(cert.a == 3 && cert.t == BigUint::from(7u32), "expected a = 3, t = 7");
    let v = cert.verification.as_ref().unwrap();
    ensure!(
        v.pass && v.roots_checked == 25 && v.field_degree == 20,
        "expected 25 roots over F_2^20"
    );

    let cert = gm_witness_search(7, 3, 2).map_err(|e| e.to_string())?;
    let cert = gm_verify_certificate(&cert).map_err(|e| e.to_string())?;
    ensure!(cert.a == 4 && cert.t == BigUint::from(2u32), "expected a = 4, t = 2");
    let v = cert.verification.as_ref().unwrap();
    ensure!(
        v.pass && v.roots_checked == 9 && v.field_degree == 3,
        "expected 9 roots over F_7^3"
    );
    Ok(())
}

fn criterion3() -> Result<(), String> {
    let scan = artin_density_scan(2, 100).map_err(|e| e.to_string())?;
    ensure!(
        scan.primes_scanned == 24 && scan.primitive_root_count == 12 && scan.full_count == 12,
        "B = 100: got {}/{}/{}",
        scan.primes_scanned,
        scan.primitive_root_count,
        scan.full_count
    );
    let scan = artin_density_scan(2, 100_000).map_err(|e| e.to_string())?;
    let artin = 0.3739558;
    ensure!(
        (scan.full_fraction - artin).abs() < 0.015,
        "B = 1e5 fraction {} too far from the Artin constant",
        scan.full_fraction
    );
    Ok(())
}

fn criterion4() -> Result<(), String> {
    let v = classify_obstruction(&poly(&[7, 0, 1]), 7, 3, 1).map_err(|e| e.to_string())?;
    ensure!(v.rank == 1, "T^2 + 7 rank {}", v.rank);
    ensure!(
        matches!(v.branch, ObstructionBranch::ConstructiveWitness { .. }),
        "T^2 + 7 must be constructive"
    );

    let v = classify_obstruction(&poly(&[5, 3, 1]), 5, 3, 1).map_err(|e| e.to_string())?;
    ensure!(v.rank == 2 && !v.heuristic, "T^2 + 3T + 5 must be rank 2 exact");
    ensure!(
        matches!(v.branch, ObstructionBranch::ConditionalObstruction4Exp),
        "T^2 + 3T + 5 must be conditional"
    );

    let w = poly(&[5, 3, 1]).mul(&poly(&[5, 1, 1])).mul(&poly(&[5, 0, 1]));
    let v = classify_obstruction(&w, 5, 3, 1).map_err(|e| e.to_string())?;
    ensure!(v.rank == 3 && v.heuristic, "synthetic sextic rank {} (heuristic {})", v.rank, v.heuristic);
    ensure!(
        matches!(v.branch, ObstructionBranch::UnconditionalObstruction6Exp),
        "synthetic sextic must be unconditional"
    );
    let r = mult_rank(&w, 5, None).map_err(|e| e.to_string())?;
    ensure!(
        matches!(r.method, RankMethod::HeuristicLLL { .. }),
        "sextic rank must go through the heuristic path"
    );
    Ok(())
}

fn criterion5() -> Result<(), String> {
    let e = EllipticCurve::short(7, 1, 0).map_err(|e| e.to_string())?;
    ensure!(
        count_at_level(0, 7, 4) == BigInt::from(2304),
        "N_4 for the supersingular curve must be 2304 = 48^2"
    );
    let cert = av_witness_search(&poly(&[7, 0, 1]), 7, 3, 1).map_err(|e| e.to_string())?;
    ensure!(
        cert.a == 2 && cert.j == 2 && cert.t == BigUint::one(),
        "expected sigma = f^2 acting as 2"
    );
    let v = av_witness_verify(&e, &cert, 0).map_err(|e| e.to_string())?;
    let rec = v.verification.unwrap();
    ensure!(
        rec.pass && rec.field_degree == 4 && rec.points_checked == 9,
        "expected all 9 points of E[3] over F_7^4, got {} over degree {}",
        rec.points_checked,
        rec.field_degree
    );
    Ok(())
}

fn criterion6() -> Result<(), String> {
    for p in [2u64, 3, 5, 7] {
        let coeff_range = |general: bool| if general { p } else { 1 };
        let general = p < 5;
        for a1 in 0..coeff_range(general) {
            for a2 in 0..coeff_range(general) {
                for a3 in 0..coeff_range(general) {
                    for a4 in 0..p {
                        for a6 in 0..p {
                            let e = match EllipticCurve::new(p, a1, a2, a3, a4, a6) {
                                Ok(e) => e,
                                Err(_) => continue,
                            };
                            let data = frobenius_data(&e, 2).map_err(|e| e.to_string())?;
                            for m in 1..=2u32 {
                                let field = field_create(p, m).map_err(|e| e.to_string())?;
                                let g =
                                    CurveGroup::new(&e, &field).map_err(|e| e.to_string())?;
                                let naive = g.count_points().map_err(|e| e.to_string())?;
                                let rec = &data.counts[m as usize - 1];
                                ensure!(
                                    *rec == BigInt::from(naive),
                                    "p={p} coeffs ({a1},{a2},{a3},{a4},{a6}) m={m}: recurrence {rec} vs naive {naive}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn span(basis: &[diffkern::ff::FFElem], ctx: &FieldCtx) -> Vec<Vec<u64>> {
    let p = ctx.p();
    let mut out = vec![ctx.zero()];
    for b in basis {
        let mut next = Vec::new();
        for c in 0..p {
            let scaled = (0..c).fold(ctx.zero(), |acc, _| acc.add(b));
            for e in &out {
                next.push(e.add(&scaled));
            }
        }
        out = next;
    }
    let mut keys: Vec<Vec<u64>> = out.iter().map(|e| e.coeffs().to_vec()).collect();
    keys.sort();
    keys.dedup();
    keys
}

fn criterion7() -> Result<(), String> {
    let f2 = field_create(2, 1).map_err(|e| e.to_string())?;
    let lam = TwistedPoly::new(&f2, [1i64, 1, 1].iter().map(|&v| f2.from_int(v)).collect());
    let k = additive_kernel(&lam, 1).map_err(|e| e.to_string())?;
    ensure!(
        k.complete && k.dimension == 2 && k.field_degree == 3,
        "Ore kernel must be 4 elements in F_8"
    );
    let ore_set = span(&k.basis, &k.field);
    ensure!(ore_set.len() == 4, "kernel must have 4 elements");
    // closure under addition is built into the span; spot-check membership
    let rep = ga_difference_kernel(&[1, 1, 1], 2, 1).map_err(|e| e.to_string())?;
    ensure!(rep.order_n == 3, "order of T mod T^2+T+1 must be 3");
    ensure!(rep.fix_dim == 2, "Gamma must be 2-dimensional over F_2");
    let ga_set = span(&rep.kernel.basis, &rep.kernel.field);
    ensure!(
        ore_set == ga_set,
        "the two kernel constructions must agree as subsets of F_8"
    );
    Ok(())
}

fn criterion8() -> Result<(), String> {
    for (p, m) in [(2u64, 2u32), (3, 2)] {
        let f = field_create(p, m).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let rand_tp = |rng: &mut ChaCha8Rng, f: &FieldCtx| {
            let d = rng.gen_range(1..=3);
            TwistedPoly::new(f, (0..d).map(|_| f.random_elem(rng)).collect())
        };
        for _ in 0..10_000 {
            let a = rand_tp(&mut rng, &f);
            let b = rand_tp(&mut rng, &f);
            let c = rand_tp(&mut rng, &f);
            ensure!(
                ore_mul(&ore_mul(&a, &b), &c) == ore_mul(&a, &ore_mul(&b, &c)),
                "associativity failed over F_{p}^{m}"
            );
            ensure!(
                ore_mul(&a, &b.add(&c)) == ore_mul(&a, &b).add(&ore_mul(&a, &c)),
                "distributivity failed over F_{p}^{m}"
            );
        }
        for _ in 0..1_000 {
            let a = rand_tp(&mut rng, &f);
            let b = rand_tp(&mut rng, &f);
            if b.is_zero() {
                continue;
            }
            let (q, r) = ore_rdivmod(&a, &b).map_err(|e| e.to_string())?;
            ensure!(ore_mul(&q, &b).add(&r) == a, "division identity failed");
            ensure!(
                r.deg().map_or(true, |d| d < b.deg().unwrap()),
                "remainder degree too large"
            );
        }
    }
    // noncommutativity witness in F_4
    let f4 = field_create(2, 2).map_err(|e| e.to_string())?;
    let omega = f4.from_coeffs(&[0, 1]).map_err(|e| e.to_string())?;
    let f = TwistedPoly::new(&f4, vec![f4.zero(), f4.one()]);
    let wf = TwistedPoly::new(&f4, vec![f4.zero(), omega]);
    ensure!(
        ore_mul(&f, &wf) != ore_mul(&wf, &f),
        "F (omega F) must differ from (omega F) F"
    );
    Ok(())
}

fn criterion9() -> Result<(), String> {
    for p in [3u64, 5] {
        for n in 1..=3u32 {
            for m in 1..=2u32 {
                let ring = match galois_ring_create(p, n, m) {
                    Ok(r) => r,
                    Err(_) => continue, // enumeration cap
                };
                // P = T - p reduces to the monomial T
                let rep = witt_kernel(&ring, &poly(&[-(p as i64), 1]), 1)
                    .map_err(|e| e.to_string())?;
                ensure!(rep.monomial_mod_p, "T - {p} must be monomial mod {p}");
                let split = witt_split_analyze(&rep);
                ensure!(
                    split.gamma_hat_size == 1,
                    "(p,n,m) = ({p},{n},{m}): Gamma-hat has {} elements",
                    split.gamma_hat_size
                );
                // P = T - 1: Gamma-hat = 1-units of the fixed subring Z/p^n
                let rep = witt_kernel(&ring, &poly(&[-1, 1]), 1).map_err(|e| e.to_string())?;
                let split = witt_split_analyze(&rep);
                ensure!(
                    split.gamma_hat_size as u64 == p.pow(n - 1),
                    "(p,n,m) = ({p},{n},{m}): fixed 1-units {} != p^(n-1)",
                    split.gamma_hat_size
                );
            }
        }
    }
    Ok(())
}

fn criterion10() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for ell in [3u64, 5, 7, 2] {
        let ctx = LAdicContext::new(ell, 40).map_err(|e| e.to_string())?;
        let modulus = ctx.modulus();
        let min_v = if ell == 2 { 2u32 } else { 1 };
        let lv = BigUint::from(ell).pow(min_v);
        for _ in 0..1_000 {
            let r = BigUint::from(rng.gen::<u64>()) * BigUint::from(rng.gen::<u64>());
            // exp(log(u)) = u on the exp-image 1-units
            let u = ctx
                .unit(&BigInt::from((BigUint::one() + &lv * &r) % &modulus))
                .map_err(|e| e.to_string())?;
            let x = ladic_log(&u).map_err(|e| e.to_string())?;
            let back = ladic_exp(&ctx, &x).map_err(|e| e.to_string())?;
            ensure!(back.value == u.value, "exp(log(u)) != u at l = {ell}");
            // log(exp(x)) = x on the domain of exp
            let x = (&lv * &r) % &modulus;
            let e = ladic_exp(&ctx, &x).map_err(|e| e.to_string())?;
            let back = ladic_log(&e).map_err(|e| e.to_string())?;
            ensure!(back == x, "log(exp(x)) != x at l = {ell}");
        }
    }
    // dlog recovery at 5^20
    let ctx = LAdicContext::new(5, 20).map_err(|e| e.to_string())?;
    let base = ctx.unit(&BigInt::from(2)).map_err(|e| e.to_string())?;
    for _ in 0..200 {
        let t = BigUint::from(rng.gen::<u64>());
        let target = ctx
            .unit(&BigInt::from(BigUint::from(2u32).modpow(&t, &ctx.modulus())))
            .map_err(|e| e.to_string())?;
        match unit_dlog(&base, &target).map_err(|e| e.to_string())? {
            DlogResult::Found { t: found, modulus } => {
                ensure!(&t % &modulus == found, "dlog of 2^{t} returned {found}");
            }
            DlogResult::NotInSubgroup => return Err(format!("2^{t} reported outside <2>")),
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(u32, fn() -> Result<(), String>)> = vec![
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
        (10, criterion10),
    ];
    let budget_secs = |n: u32| match n {
        1 => Some(30.0),
        3 => Some(60.0),
        _ => None,
    };
    let mut failures = Vec::new();
    for (n, f) in criteria {
        let start = std::time::Instant::now();
        let mut result = f();
        let elapsed = start.elapsed().as_secs_f64();
        if result.is_ok() {
            if let Some(limit) = budget_secs(n) {
                if elapsed > limit {
                    result = Err(format!("took {elapsed:.1}s, budget {limit}s"));
                }
            }
        }
        match result {
            Ok(()) => println!("criterion {n}: PASS ({elapsed:.1}s)"),
            Err(msg) => {
                println!("criterion {n}: FAIL ({msg})");
                failures.push(n);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
