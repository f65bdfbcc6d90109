//! The rank trichotomy for elliptic-curve Frobenius eigenvalues: rank <= 1
//! yields a constructive kernel witness verified on explicit torsion points;
//! rank 2 an obstruction conditional on the l-adic four-exponentials
//! conjecture; rank > 2 an unconditional obstruction via six exponentials.

pub mod curve;
pub mod rank;

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::intfact::is_prime_u64;
use crate::arith::{IntPolynomial, RatPoly};
use crate::error::{Error, Result};
use crate::ff::{field_create, frobenius_apply};
use crate::gm::closure_witness_search;
use crate::padic::ClosureDescriptor;
use crate::weil::ModularityReport;

pub use curve::{
    count_at_level, ec_point_count, frobenius_data, CurveGroup, EllipticCurve, FrobeniusData,
    Point,
};
pub use rank::{mult_rank, RankAnalysis, RankMethod};

pub const TORSION_FIELD_BOUND: u32 = 48;
pub const POINT_SAMPLE_RETRIES: u32 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct AvVerification {
    pub field_degree: u32,
    pub points_checked: u64,
    pub pass: bool,
}

/// Kernel witness for l^n-torsion of an abelian variety (elliptic here):
/// sigma = f^(j*t) acts as the scalar a = N^t on E[l^n], where N = alpha^j
/// is the first rational power of the Frobenius eigenvalue.
#[derive(Clone, Debug, Serialize)]
pub struct AvWitnessCertificate {
    pub p: u64,
    pub ell: u64,
    pub level: u32,
    pub charpoly: IntPolynomial,
    /// Smallest j <= 12 with alpha^j rational.
    pub j: u32,
    /// N = alpha^j.
    #[serde(serialize_with = "crate::serde_util::bigint_string")]
    pub n_value: BigInt,
    pub a: u64,
    #[serde(serialize_with = "crate::serde_util::biguint_string")]
    pub t: BigUint,
    pub closure: ClosureDescriptor,
    pub modularity: ModularityReport,
    pub verification: Option<AvVerification>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "branch")]
pub enum ObstructionBranch {
    ConstructiveWitness { certificate: AvWitnessCertificate },
    ConditionalObstruction4Exp,
    UnconditionalObstruction6Exp,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionVerdict {
    pub rank: u32,
    pub heuristic: bool,
    pub analysis: RankAnalysis,
    pub branch: ObstructionBranch,
}

/// Smallest j in 1..=12 with alpha^j rational, and its value; alpha a root
/// of the monic polynomial w of degree <= 2.
fn first_rational_power(w: &IntPolynomial) -> Result<(u32, BigInt)> {
    match w.degree() {
        Some(1) => {
            let c = BigRational::new(-w.constant_term(), w.leading());
            if !c.is_integer() {
                return Err(Error::Precondition("eigenvalue is not an algebraic integer".into()));
            }
            Ok((1, c.to_integer()))
        }
        Some(2) => {
            let m = w.to_rat();
            let alpha = RatPoly::new(vec![BigRational::zero(), BigRational::one()]);
            let mut cur = alpha.clone();
            for j in 1..=12u32 {
                if cur.degree().map_or(true, |d| d == 0) {
                    let c = cur.coeff(0);
                    if !c.is_integer() {
                        return Err(Error::Precondition(
                            "rational eigenvalue power is not an integer".into(),
                        ));
                    }
                    return Ok((j, c.to_integer()));
                }
                cur = cur.mul(&alpha).rem(&m);
            }
            Err(Error::Precondition(
                "no rational eigenvalue power with exponent <= 12; rank is not 1".into(),
            ))
        }
        _ => Err(Error::Precondition("witness search needs degree 1 or 2".into())),
    }
}

/// Theorem-style witness search for rank <= 1: replace p by N = alpha^j and
/// run the multiplicative-group search in the closure of <N>.
pub fn av_witness_search(
    w: &IntPolynomial,
    p: u64,
    ell: u64,
    n: u32,
) -> Result<AvWitnessCertificate> {
    if !is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    if ell == p {
        return Err(Error::Precondition("l must differ from p".into()));
    }
    let analysis = mult_rank(w, p, None)?;
    if analysis.rank > 1 || !matches!(analysis.method, RankMethod::ExactQuadratic) {
        return Err(Error::Precondition(
            "constructive witness requires exact rank <= 1".into(),
        ));
    }
    let (j, n_value) = first_rational_power(w)?;
    let found = closure_witness_search(&n_value, p, ell, n)?;
    Ok(AvWitnessCertificate {
        p,
        ell,
        level: n,
        charpoly: w.clone(),
        j,
        n_value,
        a: found.a,
        t: found.t,
        closure: found.closure,
        modularity: found.modularity,
        verification: None,
    })
}

/// Rank trichotomy; the constructive branch carries a witness certificate.
pub fn classify_obstruction(
    w: &IntPolynomial,
    p: u64,
    ell: u64,
    n: u32,
) -> Result<ObstructionVerdict> {
    let analysis = mult_rank(w, p, Some(ell))?;
    let heuristic = matches!(analysis.method, RankMethod::HeuristicLLL { .. });
    let branch = match analysis.rank {
        0 | 1 => ObstructionBranch::ConstructiveWitness {
            certificate: av_witness_search(w, p, ell, n)?,
        },
        2 => ObstructionBranch::ConditionalObstruction4Exp,
        _ => ObstructionBranch::UnconditionalObstruction6Exp,
    };
    Ok(ObstructionVerdict {
        rank: analysis.rank,
        heuristic,
        analysis,
        branch,
    })
}

fn point_key(p: &Point) -> Vec<u64> {
    match p {
        None => vec![u64::MAX],
        Some((x, y)) => {
            let mut k = x.coeffs().to_vec();
            k.extend_from_slice(y.coeffs());
            k
        }
    }
}

/// Order of a point of l-power order, as the exponent e with ord = l^e.
fn lpower_order(g: &CurveGroup, pt: &Point, ell: u64, cap: u32) -> Option<u32> {
    let mut cur = pt.clone();
    for e in 0..=cap {
        if cur.is_none() {
            return Some(e);
        }
        cur = g.scalar_mul(&BigInt::from(ell), &cur);
    }
    None
}

/// Construct all of E[l^n] over the given field by cofactor multiplication
/// of seeded random points; returns the full subgroup (size l^(2n)) or None
/// when the sample budget is exhausted (torsion not rational, or bad luck).
fn construct_torsion(
    g: &CurveGroup,
    count: &BigInt,
    ell: u64,
    n: u32,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Point>> {
    let mut v = 0u32;
    let mut cof = count.clone();
    let lb = BigInt::from(ell);
    while (&cof % &lb).is_zero() {
        cof /= &lb;
        v += 1;
    }
    if v < 2 * n {
        return None;
    }
    let target = BigInt::from(ell).pow(2 * n).to_u64().unwrap();
    let mut subgroup: Vec<Point> = vec![None];
    let mut keys: HashSet<Vec<u64>> = subgroup.iter().map(point_key).collect();
    for _ in 0..POINT_SAMPLE_RETRIES {
        let p = g.random_point(rng);
        let mut q = g.scalar_mul(&cof, &p);
        let e = lpower_order(g, &q, ell, v)?;
        if e > n {
            q = g.scalar_mul(&BigInt::from(ell).pow(e - n), &q);
        }
        if keys.contains(&point_key(&q)) {
            continue;
        }
        // close the subgroup under the new generator
        let mut additions: Vec<Point> = Vec::new();
        let mut mult = q.clone();
        while mult.is_some() {
            for s in &subgroup {
                let t = g.add(s, &mult);
                if keys.insert(point_key(&t)) {
                    additions.push(t);
                }
            }
            mult = g.add(&mult, &q);
        }
        subgroup.extend(additions);
        if subgroup.len() as u64 == target {
            return Some(subgroup);
        }
    }
    None
}

/// Verify a constructive certificate on an explicit curve: locate the first
/// extension with E[l^n] rational, build the torsion group, and check
/// f^(j t)(P) = [a] P for every point.
pub fn av_witness_verify(
    e: &EllipticCurve,
    cert: &AvWitnessCertificate,
    seed: u64,
) -> Result<AvWitnessCertificate> {
    let data = frobenius_data(e, 1)?;
    if data.charpoly != cert.charpoly {
        return Err(Error::Precondition(
            "certificate charpoly does not match the curve".into(),
        ));
    }
    let ell = cert.ell;
    let n = cert.level;
    let ell_n = BigInt::from(ell).pow(n);
    let ell_2n = BigInt::from(ell).pow(2 * n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for m in 1..=TORSION_FIELD_BOUND {
        let count = count_at_level(data.trace, e.p, m);
        if !(&count % &ell_2n).is_zero() {
            continue;
        }
        // Weil pairing: full torsion needs mu_{l^n} in the field.
        let qm1 = BigInt::from(e.p).pow(m) - BigInt::one();
        if !(&qm1 % &ell_n).is_zero() {
            continue;
        }
        let field = field_create(e.p, m)?;
        let g = CurveGroup::new(e, &field)?;
        let torsion = match construct_torsion(&g, &count, ell, n, &mut rng) {
            Some(t) => t,
            None => continue,
        };
        // f^(j*t) on coordinates; Frobenius has order m over F_{p^m}.
        let e_frob = (BigUint::from(cert.j) * &cert.t % BigUint::from(m)).to_u32().unwrap();
        let a = BigInt::from(cert.a);
        let mut checked = 0u64;
        for pt in &torsion {
            let lhs = pt
                .as_ref()
                .map(|(x, y)| (frobenius_apply(x, e_frob), frobenius_apply(y, e_frob)));
            let rhs = g.scalar_mul(&a, pt);
            if lhs != rhs {
                return Err(Error::VerificationFailed(format!(
                    "torsion point {:?} violates f^(jt) = [a]",
                    pt.as_ref().map(|(x, y)| (x.to_string(), y.to_string()))
                )));
            }
            checked += 1;
        }
        let mut out = cert.clone();
        out.verification = Some(AvVerification {
            field_degree: m,
            points_checked: checked,
            pass: true,
        });
        return Ok(out);
    }
    Err(Error::TorsionFieldBound(TORSION_FIELD_BOUND))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn witness_supersingular_f7() {
        let cert = av_witness_search(&poly(&[7, 0, 1]), 7, 3, 1).unwrap();
        assert_eq!((cert.j, cert.a), (2, 2));
        assert_eq!(cert.n_value, BigInt::from(-7));
        assert_eq!(cert.t, BigUint::from(1u32));
        assert!(cert.closure.is_full);
    }

    #[test]
    fn witness_f2_curve() {
        let cert = av_witness_search(&poly(&[2, 2, 1]), 2, 5, 1).unwrap();
        assert_eq!((cert.j, cert.a), (4, 6));
        assert_eq!(cert.n_value, BigInt::from(-4));
        assert_eq!((cert.closure.e, cert.closure.s), (1, 1));
    }

    #[test]
    fn witness_rejects_rank_two() {
        assert!(av_witness_search(&poly(&[5, 3, 1]), 5, 3, 1).is_err());
    }

    #[test]
    fn verify_f7_three_torsion() {
        let e = EllipticCurve::short(7, 1, 0).unwrap();
        let cert = av_witness_search(&poly(&[7, 0, 1]), 7, 3, 1).unwrap();
        let v = av_witness_verify(&e, &cert, 0).unwrap();
        let rec = v.verification.unwrap();
        assert!(rec.pass);
        assert_eq!(rec.field_degree, 4);
        assert_eq!(rec.points_checked, 9);
    }

    #[test]
    fn verify_f2_five_torsion() {
        let e = EllipticCurve::new(2, 0, 0, 1, 1, 0).unwrap();
        let cert = av_witness_search(&poly(&[2, 2, 1]), 2, 5, 1).unwrap();
        let v = av_witness_verify(&e, &cert, 0).unwrap();
        let rec = v.verification.unwrap();
        assert!(rec.pass);
        assert_eq!(rec.field_degree, 4);
        assert_eq!(rec.points_checked, 25);
    }

    #[test]
    fn trichotomy_branches() {
        let v = classify_obstruction(&poly(&[7, 0, 1]), 7, 3, 1).unwrap();
        assert_eq!(v.rank, 1);
        assert!(matches!(v.branch, ObstructionBranch::ConstructiveWitness { .. }));

        let v = classify_obstruction(&poly(&[5, 3, 1]), 5, 3, 1).unwrap();
        assert_eq!(v.rank, 2);
        assert!(matches!(v.branch, ObstructionBranch::ConditionalObstruction4Exp));
        assert!(!v.heuristic);

        let w = poly(&[5, 3, 1]).mul(&poly(&[5, 1, 1])).mul(&poly(&[5, 0, 1]));
        let v = classify_obstruction(&w, 5, 3, 1).unwrap();
        assert_eq!(v.rank, 3);
        assert!(matches!(v.branch, ObstructionBranch::UnconditionalObstruction6Exp));
        assert!(v.heuristic);
    }

    #[test]
    fn mismatched_charpoly_rejected() {
        let e = EllipticCurve::short(7, 1, 0).unwrap();
        let mut cert = av_witness_search(&poly(&[7, 0, 1]), 7, 3, 1).unwrap();
        cert.charpoly = poly(&[7, 1, 1]);
        assert!(av_witness_verify(&e, &cert, 0).is_err());
    }
}
