//! Kernel certificates for the multiplicative group: find an integer a with
//! p^t = a mod l^n whose polynomial T - a is modular, verify the kernel
//! relation pointwise on mu_{l^n} inside an explicit field, scan primes for
//! full-closure density, and search simultaneous witnesses for a finite set
//! of primes.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::intfact::{is_prime_u64, mult_order_mod, powmod};
use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::ff::{field_create, frobenius_apply, roots_of_unity};
use crate::padic::{closure_contains, closure_of, ClosureDescriptor, LAdicContext};
use crate::weil::{classify_modular, ModularityReport};

pub const WITNESS_SEARCH_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct VerificationRecord {
    pub field_degree: u32,
    pub roots_checked: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessCertificate {
    pub p: u64,
    pub ell: u64,
    pub a: u64,
    pub closure: ClosureDescriptor,
    pub level: u32,
    /// Exponent with p^t = a mod l^level.
    #[serde(serialize_with = "crate::serde_util::biguint_string")]
    pub t: BigUint,
    /// None until gm_verify_certificate runs.
    pub verification: Option<VerificationRecord>,
    pub modularity: ModularityReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRecord {
    pub ell: u64,
    pub e: u64,
    pub s: u32,
    pub is_primitive_root: bool,
    pub is_full: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityScan {
    pub p: u64,
    pub bound: u64,
    pub records: Vec<DensityRecord>,
    pub primes_scanned: u64,
    pub primitive_root_count: u64,
    pub full_count: u64,
    pub primitive_root_fraction: f64,
    pub full_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome")]
pub enum SSetResult {
    Found {
        a: u64,
        certificates: Vec<WitnessCertificate>,
    },
    /// Some prime's closure rejected every admissible candidate.
    Infeasible { ell: u64 },
    /// Bound exhausted without a witness or a rejection pattern.
    Unknown { bound: u64 },
}

fn check_distinct_primes(p: u64, ell: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    if p == ell {
        return Err(Error::Precondition("l must differ from p".into()));
    }
    Ok(())
}

/// Precision at which membership is decided: deep enough that a solution mod
/// l^k forces membership in the actual closure (one level past the depth s),
/// and at least the requested level.
fn filter_level(ell: u64, n: u32, s: u32) -> u32 {
    let base = n.max(s + 1);
    if ell == 2 {
        base.max(3)
    } else {
        base
    }
}

/// The T - a polynomial.
fn linear_poly(a: u64) -> IntPolynomial {
    IntPolynomial::new(vec![-BigInt::from(a), BigInt::from(1)])
}

/// Shared search core: smallest a >= 2 with gcd(a, l) = 1, a in the closure
/// of <base> at level max(n, s+1), and T - a modular for p. The returned
/// exponent t is the discrete log of a base `base` at level n itself.
pub(crate) struct ClosureWitness {
    pub a: u64,
    pub t: BigUint,
    pub closure: ClosureDescriptor,
    pub modularity: ModularityReport,
}

pub(crate) fn closure_witness_search(
    base: &BigInt,
    p: u64,
    ell: u64,
    n: u32,
) -> Result<ClosureWitness> {
    let ell_n = ell
        .checked_pow(n)
        .ok_or_else(|| Error::Precondition("l^n exceeds u64".into()))?;
    let work = LAdicContext::new(ell, filter_level(ell, n.max(8), 2))?;
    let closure = closure_of(base, &work)?;
    let check_at = filter_level(ell, n, closure.s);

    for a in 2..=WITNESS_SEARCH_BOUND {
        if a % ell == 0 {
            continue;
        }
        let (member, t_high) = closure_contains(&closure, &BigInt::from(a), check_at)?;
        if !member {
            continue;
        }
        let modularity = classify_modular(&linear_poly(a), p)?;
        if !modularity.is_modular {
            continue;
        }
        // Reduce the witness exponent to the requested level.
        let base_n = base.mod_floor(&BigInt::from(ell_n)).to_u64().unwrap();
        let ord_n = mult_order_mod(base_n, ell_n);
        let t = t_high.unwrap() % BigUint::from(ord_n);
        debug_assert_eq!(
            BigUint::from(base_n).modpow(&t, &BigUint::from(ell_n)),
            BigUint::from(a % ell_n)
        );
        return Ok(ClosureWitness { a, t, closure, modularity });
    }
    Err(Error::SearchBoundExhausted(WITNESS_SEARCH_BOUND))
}

/// Smallest a >= 2 passing the unit, closure, and modularity filters for the
/// closure generated by p itself.
pub fn gm_witness_search(p: u64, ell: u64, n: u32) -> Result<WitnessCertificate> {
    check_distinct_primes(p, ell)?;
    if n == 0 {
        return Err(Error::Precondition("level must be >= 1".into()));
    }
    let w = closure_witness_search(&BigInt::from(p), p, ell, n)?;
    Ok(WitnessCertificate {
        p,
        ell,
        a: w.a,
        closure: w.closure,
        level: n,
        t: w.t,
        verification: None,
        modularity: w.modularity,
    })
}

/// Enumerate all of mu_{l^n} in F_{p^m}, m = ord(p mod l^n), and check
/// zeta^{p^t} = zeta^a for every root. Pointwise, not sampled.
pub fn gm_verify_certificate(cert: &WitnessCertificate) -> Result<WitnessCertificate> {
    let ell_n = cert
        .ell
        .checked_pow(cert.level)
        .ok_or_else(|| Error::Precondition("l^n exceeds u64".into()))?;
    let m = mult_order_mod(cert.p % ell_n, ell_n) as u32;
    let field = field_create(cert.p, m)?;
    let roots = roots_of_unity(&field, ell_n)?;
    // Frobenius has order m on the field, so t may be reduced mod m.
    let t_red = (&cert.t % BigUint::from(m)).to_u32().unwrap();
    let mut checked = 0u64;
    for zeta in &roots {
        let lhs = frobenius_apply(zeta, t_red);
        let rhs = zeta.pow(cert.a);
        if lhs != rhs {
            return Err(Error::VerificationFailed(format!(
                "zeta = {zeta} violates zeta^(p^t) = zeta^a"
            )));
        }
        checked += 1;
    }
    let mut out = cert.clone();
    out.verification = Some(VerificationRecord {
        field_degree: m,
        roots_checked: checked,
        pass: true,
    });
    Ok(out)
}

fn sieve_odd_primes(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            if i > 2 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// v_l(p^e - 1), capped at 10 (enough to distinguish the Wieferich-type
/// condition s > 1 and report small depths exactly).
fn closure_depth(p: u64, e: u64, ell: u64) -> u32 {
    let mut s = 1u32;
    // s >= 1 is guaranteed by e being the order of p mod l.
    let mut modulus = BigUint::from(ell) * BigUint::from(ell);
    let pb = BigUint::from(p);
    while s < 10 {
        if pb.modpow(&BigUint::from(e), &modulus) != BigUint::from(1u32) {
            break;
        }
        s += 1;
        modulus *= ell;
    }
    s
}

/// For every odd prime l <= B, l != p: the order e of p mod l and the depth
/// s, plus the primitive-root and full-closure flags and summary fractions.
pub fn artin_density_scan(p: u64, bound: u64) -> Result<DensityScan> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if bound > 10_000_000 {
        return Err(Error::Precondition("bound capped at 10^7".into()));
    }
    let mut records = Vec::new();
    for ell in sieve_odd_primes(bound) {
        if ell == p {
            continue;
        }
        let r = p % ell;
        let e = crate::arith::intfact::order_dividing(r, ell, ell - 1);
        // Fast path for s = 1: p^e mod l^2 in machine words when possible.
        let s = if let Some(l2) = ell.checked_mul(ell) {
            if powmod(p % l2, e, l2) != 1 {
                1
            } else {
                closure_depth(p, e, ell)
            }
        } else {
            closure_depth(p, e, ell)
        };
        let is_primitive_root = e == ell - 1;
        records.push(DensityRecord {
            ell,
            e,
            s,
            is_primitive_root,
            is_full: is_primitive_root && s == 1,
        });
    }
    let primes_scanned = records.len() as u64;
    let primitive_root_count = records.iter().filter(|r| r.is_primitive_root).count() as u64;
    let full_count = records.iter().filter(|r| r.is_full).count() as u64;
    let frac = |c: u64| {
        if primes_scanned == 0 {
            0.0
        } else {
            c as f64 / primes_scanned as f64
        }
    };
    Ok(DensityScan {
        p,
        bound,
        primitive_root_fraction: frac(primitive_root_count),
        full_fraction: frac(full_count),
        records,
        primes_scanned,
        primitive_root_count,
        full_count,
    })
}

/// One a serving every prime in S at once: unit mod each l, inside each
/// closure at level n, and T - a modular. Candidates ascend, so the result
/// is the smallest such witness.
pub fn s_set_witness(p: u64, s_primes: &[u64], n: u32) -> Result<SSetResult> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if s_primes.len() > 8 {
        return Err(Error::Precondition("at most 8 primes in S".into()));
    }
    let mut set: Vec<u64> = s_primes.to_vec();
    set.sort_unstable();
    set.dedup();
    for &ell in &set {
        check_distinct_primes(p, ell)?;
    }
    if n == 0 {
        return Err(Error::Precondition("level must be >= 1".into()));
    }
    let mut closures = Vec::new();
    for &ell in &set {
        let work = LAdicContext::new(ell, filter_level(ell, n.max(8), 2))?;
        closures.push(closure_of(&BigInt::from(p), &work)?);
    }
    let mut passed_any = vec![false; set.len()];
    'cand: for a in 2..=WITNESS_SEARCH_BOUND {
        if set.iter().any(|&ell| a % ell == 0) {
            continue;
        }
        for (i, closure) in closures.iter().enumerate() {
            let level = filter_level(set[i], n, closure.s);
            let (member, _) = closure_contains(closure, &BigInt::from(a), level)?;
            if !member {
                continue 'cand;
            }
            passed_any[i] = true;
        }
        let modularity = classify_modular(&linear_poly(a), p)?;
        if !modularity.is_modular {
            continue;
        }
        let mut certificates = Vec::new();
        for (i, closure) in closures.iter().enumerate() {
            let ell = set[i];
            let ell_n = ell
                .checked_pow(n)
                .ok_or_else(|| Error::Precondition("l^n exceeds u64".into()))?;
            let level = filter_level(ell, n, closure.s);
            let (_, t_high) = closure_contains(closure, &BigInt::from(a), level)?;
            let ord_n = mult_order_mod(p % ell_n, ell_n);
            certificates.push(WitnessCertificate {
                p,
                ell,
                a,
                closure: closure.clone(),
                level: n,
                t: t_high.unwrap() % BigUint::from(ord_n),
                verification: None,
                modularity: modularity.clone(),
            });
        }
        return Ok(SSetResult::Found { a, certificates });
    }
    // A prime whose closure test never passed rejected every admissible
    // candidate; report the first such prime.
    if let Some(i) = passed_any.iter().position(|&b| !b) {
        if !set.is_empty() {
            return Ok(SSetResult::Infeasible { ell: set[i] });
        }
    }
    Ok(SSetResult::Unknown {
        bound: WITNESS_SEARCH_BOUND,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_2_5_level2() {
        let c = gm_witness_search(2, 5, 2).unwrap();
        assert_eq!(c.a, 3);
        assert_eq!(c.t, BigUint::from(7u32));
        assert!(c.closure.is_full);
        assert!(c.modularity.is_modular);
        let v = gm_verify_certificate(&c).unwrap();
        let rec = v.verification.unwrap();
        assert!(rec.pass);
        assert_eq!(rec.field_degree, 20);
        assert_eq!(rec.roots_checked, 25);
    }

    #[test]
    fn witness_7_3_level2() {
        let c = gm_witness_search(7, 3, 2).unwrap();
        assert_eq!(c.a, 4);
        assert_eq!(c.t, BigUint::from(2u32));
        assert!(!c.closure.is_full);
        assert_eq!((c.closure.e, c.closure.s), (1, 1));
        let v = gm_verify_certificate(&c).unwrap();
        let rec = v.verification.unwrap();
        assert!(rec.pass);
        assert_eq!(rec.field_degree, 3);
        assert_eq!(rec.roots_checked, 9);
    }

    #[test]
    fn witness_2_3_level1() {
        let c = gm_witness_search(2, 3, 1).unwrap();
        assert_eq!(c.a, 5);
        assert_eq!(c.t, BigUint::from(1u32));
    }

    #[test]
    fn certificate_coherence_restricts() {
        // A witness found at level 3 must still verify at lower levels.
        let c = gm_witness_search(2, 3, 3).unwrap();
        for level in 1..=3 {
            let mut r = c.clone();
            r.level = level;
            let ell_n = 3u64.pow(level);
            r.t = &c.t % BigUint::from(mult_order_mod(2 % ell_n, ell_n));
            assert!(gm_verify_certificate(&r).unwrap().verification.unwrap().pass);
        }
    }

    #[test]
    fn density_p2_b100() {
        let scan = artin_density_scan(2, 100).unwrap();
        assert_eq!(scan.primes_scanned, 24);
        assert_eq!(scan.primitive_root_count, 12);
        assert_eq!(scan.full_count, 12);
        let full: Vec<u64> = scan
            .records
            .iter()
            .filter(|r| r.is_full)
            .map(|r| r.ell)
            .collect();
        assert_eq!(full, vec![3, 5, 11, 13, 19, 29, 37, 53, 59, 61, 67, 83]);
    }

    #[test]
    fn density_p3_b10() {
        let scan = artin_density_scan(3, 10).unwrap();
        let ells: Vec<u64> = scan.records.iter().map(|r| r.ell).collect();
        assert_eq!(ells, vec![5, 7]);
        assert!((scan.primitive_root_fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_is_subset_of_primitive() {
        let scan = artin_density_scan(5, 500).unwrap();
        for r in &scan.records {
            if r.is_full {
                assert!(r.is_primitive_root);
            }
        }
    }

    #[test]
    fn wieferich_is_not_full() {
        // 1093 is a Wieferich prime for p = 2: s > 1 despite 2 having large
        // order; the flags must separate the two conditions.
        let scan = artin_density_scan(2, 1100).unwrap();
        let r = scan.records.iter().find(|r| r.ell == 1093).unwrap();
        assert!(r.s > 1);
        assert!(!r.is_full);
    }

    #[test]
    fn sset_examples() {
        match s_set_witness(2, &[3, 5], 1).unwrap() {
            SSetResult::Found { a, certificates } => {
                assert_eq!(a, 7);
                assert_eq!(certificates.len(), 2);
            }
            other => panic!("expected a witness, got {other:?}"),
        }
        match s_set_witness(7, &[3], 1).unwrap() {
            SSetResult::Found { a, .. } => assert_eq!(a, 4),
            other => panic!("expected a witness, got {other:?}"),
        }
        // Empty S: smallest non-power of p.
        match s_set_witness(2, &[], 1).unwrap() {
            SSetResult::Found { a, .. } => assert_eq!(a, 3),
            other => panic!("expected a witness, got {other:?}"),
        }
        match s_set_witness(3, &[], 1).unwrap() {
            SSetResult::Found { a, .. } => assert_eq!(a, 2),
            other => panic!("expected a witness, got {other:?}"),
        }
    }
}
