//! Multiplicative rank of the eigenvalue set of a Weil polynomial: the free
//! rank of the subgroup of C^* generated by all roots. Degree 2 is decided
//! exactly (the ratio alpha^2/q is a root of unity iff the rank drops);
//! higher degrees use LLL on fixed-precision logarithm vectors and are
//! labeled heuristic.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{int_poly_factor, IntPolynomial, RatPoly};
use crate::error::{Error, Result};
use crate::padic::{ladic_log, LAdicContext, DEFAULT_PRECISION};
use crate::weil::{weil_weight_of_factor, Weight, WeilReason};

pub const RANK_DEGREE_CAP: usize = 6;
/// Any root of unity among eigenvalue ratios in a field of degree <= 6 has
/// order w with phi(w) <= 6, hence w | 252.
const TORSION_BOUND: u64 = 252;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method")]
pub enum RankMethod {
    ExactQuadratic,
    HeuristicLLL { precision: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct LadicLogVector {
    pub eigenvalue: String,
    pub ell: u64,
    /// log of the 1-unit part c^(l-1) at the default precision; only
    /// rational eigenvalues embed into Q_l unconditionally.
    #[serde(serialize_with = "crate::serde_util::biguint_string")]
    pub log_unit_part: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankAnalysis {
    pub weil_poly: IntPolynomial,
    pub weight: Weight,
    pub eigenvalues: Vec<String>,
    pub rank: u32,
    pub method: RankMethod,
    /// Verified exponent vectors m with prod alpha_i^(m_i) a root of unity.
    pub relations: Vec<Vec<i64>>,
    pub log_vectors: Option<Vec<LadicLogVector>>,
}

/// Validate that every irreducible factor is Weil of one common weight;
/// returns (distinct factors, weight).
fn validate_weil(w: &IntPolynomial, p: u64) -> Result<(Vec<IntPolynomial>, Weight)> {
    let deg = w.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 || deg > RANK_DEGREE_CAP {
        return Err(Error::DegreeCap(deg, RANK_DEGREE_CAP));
    }
    let fl = int_poly_factor(w)?;
    let mut weight: Option<Weight> = None;
    let mut factors = Vec::new();
    for (f, _) in &fl.factors {
        if f.constant_term().is_zero() {
            return Err(Error::Precondition("Weil polynomial cannot have root 0".into()));
        }
        let v = weil_weight_of_factor(f, p)?;
        let wgt = match v.reason {
            WeilReason::WeilOfWeight(wgt) => wgt,
            _ => {
                return Err(Error::Precondition(format!(
                    "factor {f} is not a Weil polynomial at p = {p}"
                )))
            }
        };
        match weight {
            None => weight = Some(wgt),
            Some(prev) if prev == wgt => {}
            Some(_) => {
                return Err(Error::Precondition(
                    "factors have unequal Weil weights".into(),
                ))
            }
        }
        factors.push(f.clone());
    }
    Ok((factors, weight.unwrap()))
}

fn powmod_rat(base: &RatPoly, e: u64, m: &RatPoly) -> RatPoly {
    let mut acc = RatPoly::one();
    let mut b = base.rem(m);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(m);
        }
        b = b.mul(&b).rem(m);
        e >>= 1;
    }
    acc
}

/// Is u (an element of Q[T]/(m), m irreducible quadratic) a root of unity?
/// In an imaginary quadratic field torsion orders divide 12.
fn is_root_of_unity_quadratic(u: &RatPoly, m: &RatPoly) -> bool {
    for k in [1u64, 2, 3, 4, 6, 12] {
        if powmod_rat(u, k, m).sub(&RatPoly::one()).is_zero() {
            return true;
        }
    }
    false
}

/// All distinct complex roots of the squarefree polynomial, Durand-Kerner.
fn complex_roots(f: &IntPolynomial) -> Vec<Complex64> {
    let deg = f.degree().unwrap();
    let lc = f.leading().to_f64().unwrap();
    let coeffs: Vec<Complex64> = f
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap() / lc, 0.0))
        .collect();
    let eval = |x: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut xs: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..200 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= xs[i] - xs[j];
                }
            }
            let step = eval(xs[i]) / denom;
            xs[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    xs
}

/// Lovasz-reduced basis, in place; plain f64 LLL with delta = 0.99, fine for
/// the tiny well-conditioned lattices used here.
fn lll_reduce(basis: &mut Vec<Vec<f64>>) {
    let n = basis.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut k = 1;
    while k < n {
        // Gram-Schmidt up to k (recomputed; n <= 8 so cost is irrelevant)
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut v = basis[i].clone();
            mu[i][i] = 1.0;
            for j in 0..i {
                mu[i][j] = dot(&basis[i], &star[j]) / dot(&star[j], &star[j]);
                for (t, s) in v.iter_mut().zip(&star[j]) {
                    *t -= mu[i][j] * s;
                }
            }
            star.push(v);
        }
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = basis[j].clone();
                for (t, s) in basis[k].iter_mut().zip(&bj) {
                    *t -= q * s;
                }
                for l in 0..=j {
                    mu[k][l] -= q * mu[j][l];
                }
            }
        }
        let bk = dot(&star[k], &star[k]);
        let bk1 = dot(&star[k - 1], &star[k - 1]);
        if bk >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bk1 {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
}

/// Rank of an integer matrix by fraction-free elimination.
fn int_matrix_rank(rows: &[Vec<i64>]) -> u32 {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let (nr, nc) = (m.len(), if m.is_empty() { 0 } else { m[0].len() });
    let mut rank = 0;
    let mut col = 0;
    while rank < nr && col < nc {
        if let Some(piv) = (rank..nr).find(|&r| m[r][col] != 0) {
            m.swap(rank, piv);
            for r in rank + 1..nr {
                if m[r][col] != 0 {
                    let (a, b) = (m[rank][col], m[r][col]);
                    for c in col..nc {
                        m[r][c] = m[r][c] * a - m[rank][c] * b;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank as u32
}

const LLL_SCALE: f64 = 1e7;
const RELATION_TOL: f64 = 1e-5;
const MAX_EXPONENT: i64 = 24;

/// Candidate torsion relations among the roots, detected by LLL on scaled
/// (log|alpha|, arg alpha) columns with an extra torsion generator row, then
/// verified numerically at working precision.
fn heuristic_relations(roots: &[Complex64]) -> Vec<Vec<i64>> {
    let n = roots.len();
    let two_pi = std::f64::consts::TAU;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for (i, r) in roots.iter().enumerate() {
        let mut v = vec![0.0; n + 2];
        v[i] = 1.0;
        v[n] = LLL_SCALE * r.norm().ln();
        v[n + 1] = LLL_SCALE * r.arg();
        basis.push(v);
    }
    let mut tors = vec![0.0; n + 2];
    tors[n + 1] = LLL_SCALE * two_pi / TORSION_BOUND as f64;
    basis.push(tors);

    lll_reduce(&mut basis);

    let mut relations: Vec<Vec<i64>> = Vec::new();
    'vectors: for v in &basis {
        if v[n].abs() > 0.5 || v[n + 1].abs() > 0.5 {
            continue;
        }
        let m: Vec<i64> = v[..n].iter().map(|x| x.round() as i64).collect();
        if m.iter().all(|&x| x == 0) {
            continue;
        }
        if m.iter().any(|&x| x.abs() > MAX_EXPONENT) {
            continue;
        }
        // verify: sum m_i log|a_i| = 0 and sum m_i arg(a_i) = 0 mod 2pi/w
        let logsum: f64 = m.iter().zip(roots).map(|(&mi, r)| mi as f64 * r.norm().ln()).sum();
        let argsum: f64 = m.iter().zip(roots).map(|(&mi, r)| mi as f64 * r.arg()).sum();
        let unit = two_pi / TORSION_BOUND as f64;
        let frac = (argsum / unit - (argsum / unit).round()).abs();
        if logsum.abs() > RELATION_TOL || frac * unit > RELATION_TOL {
            continue 'vectors;
        }
        relations.push(m);
    }
    relations
}

/// Multiplicative rank of the root set of a Weil polynomial at p. An l may
/// be supplied to attach l-adic logarithm vectors for rational eigenvalues.
pub fn mult_rank(w: &IntPolynomial, p: u64, ell: Option<u64>) -> Result<RankAnalysis> {
    let (factors, weight) = validate_weil(w, p)?;
    let radical = factors
        .iter()
        .fold(IntPolynomial::one(), |acc, f| acc.mul(f));
    let sf_deg = radical.degree().unwrap();

    let mut eigenvalues: Vec<String> = Vec::new();
    let mut rational_eigs: Vec<BigRational> = Vec::new();
    for f in &factors {
        if f.degree() == Some(1) {
            let c = BigRational::new(-f.constant_term(), f.leading());
            eigenvalues.push(c.to_string());
            rational_eigs.push(c);
        } else if f.degree() == Some(2) && f.leading().is_one() {
            let a = -f.coeff(1);
            let d = &a * &a - BigInt::from(4) * f.constant_term();
            eigenvalues.push(format!("({a} + sqrt({d}))/2"));
            eigenvalues.push(format!("({a} - sqrt({d}))/2"));
        }
    }

    let (rank, method, relations) = if sf_deg <= 2 {
        if factors.iter().all(|f| f.degree() == Some(1)) {
            // roots are +-p^k: a single generator modulo torsion
            let rel = if factors.len() == 2 { vec![vec![1, -1]] } else { vec![] };
            (1, RankMethod::ExactQuadratic, rel)
        } else {
            // one irreducible quadratic; u = alpha^2/q, q = |norm| = |c0/lc|
            let f = &factors[0];
            let q = BigRational::new(f.constant_term().abs(), f.leading().abs());
            let m = f.to_rat();
            let alpha = RatPoly::new(vec![BigRational::zero(), BigRational::one()]);
            let u = powmod_rat(&alpha, 2, &m).scale(&q.recip());
            if is_root_of_unity_quadratic(&u, &m) {
                // alpha^2 = q * (root of unity): alpha and beta = q/alpha agree
                // modulo torsion
                (1, RankMethod::ExactQuadratic, vec![vec![1, -1]])
            } else {
                (2, RankMethod::ExactQuadratic, vec![])
            }
        }
    } else {
        let roots = complex_roots(&radical);
        if eigenvalues.len() != roots.len() {
            eigenvalues = roots
                .iter()
                .map(|r| format!("{:.10}{}{:.10}i", r.re, if r.im < 0.0 { "-" } else { "+" }, r.im.abs()))
                .collect();
        }
        let relations = heuristic_relations(&roots);
        let relrank = int_matrix_rank(&relations);
        (
            roots.len() as u32 - relrank,
            RankMethod::HeuristicLLL { precision: RELATION_TOL },
            relations,
        )
    };

    let log_vectors = match ell {
        None => None,
        Some(l) => {
            let ctx = LAdicContext::new(l, DEFAULT_PRECISION.max(3))?;
            let mut vecs = Vec::new();
            for c in &rational_eigs {
                if !c.is_integer() {
                    continue;
                }
                let ci = c.to_integer();
                if (&ci % BigInt::from(l)).is_zero() {
                    continue;
                }
                let exp = if l == 2 { 2 } else { l - 1 };
                let unit = ctx.unit(&ci.pow(exp as u32))?;
                vecs.push(LadicLogVector {
                    eigenvalue: c.to_string(),
                    ell: l,
                    log_unit_part: ladic_log(&unit)?,
                });
            }
            Some(vecs)
        }
    };

    Ok(RankAnalysis {
        weil_poly: w.clone(),
        weight,
        eigenvalues,
        rank,
        method,
        relations,
        log_vectors,
    })
}
