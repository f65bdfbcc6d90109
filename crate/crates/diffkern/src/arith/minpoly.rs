//! Minimal polynomials of algebraic expressions in a root of an irreducible
//! polynomial, via characteristic polynomials of multiplication matrices in
//! Q[y]/(m). Exact rational arithmetic throughout.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{IntPolynomial, RatPoly};
use crate::error::{Error, Result};

pub const DEGREE_CAP: usize = 64;

/// Characteristic polynomial det(xI - A) of a square rational matrix, by the
/// Faddeev-LeVerrier recursion.
fn charpoly(a: &[Vec<BigRational>]) -> RatPoly {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut cs: Vec<BigRational> = Vec::with_capacity(n);
    for k in 1..=n {
        // m <- a * m
        let mut am = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = &a[i][l] * &m[l][j];
                    am[i][j] += t;
                }
            }
        }
        let mut tr = BigRational::zero();
        for i in 0..n {
            tr += &am[i][i];
        }
        let c = tr / BigRational::from_integer(BigInt::from(k));
        for i in 0..n {
            am[i][i] -= &c;
        }
        cs.push(c);
        m = am;
    }
    // x^n - c1 x^{n-1} - ... - cn, with the sign convention folded in:
    // det(xI - A) = x^n - c1 x^{n-1} - c2 x^{n-2} - ...
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    for (k, c) in cs.iter().enumerate() {
        coeffs[n - 1 - k] = -c.clone();
    }
    RatPoly::new(coeffs)
}

/// Matrix of multiplication by `elem` in Q[y]/(modulus), basis 1, y, ...,
/// y^{d-1}. `modulus` need not be monic; it is normalized internally.
fn mult_matrix(elem: &RatPoly, modulus: &RatPoly) -> Vec<Vec<BigRational>> {
    let lc = modulus.leading().recip();
    let m = modulus.scale(&lc);
    let d = m.degree().unwrap();
    let mut cols: Vec<RatPoly> = Vec::with_capacity(d);
    let mut cur = elem.rem(&m);
    let y = RatPoly::new(vec![BigRational::zero(), BigRational::one()]);
    for _ in 0..d {
        cols.push(cur.clone());
        cur = cur.mul(&y).rem(&m);
    }
    (0..d)
        .map(|i| (0..d).map(|j| cols[j].coeff(i)).collect())
        .collect()
}

/// Minimal polynomial of alpha^d, alpha a root of the irreducible m.
/// Computed as the squarefree part of the characteristic polynomial of
/// multiplication by y^d in Q[y]/(m); returned primitive with positive
/// leading coefficient.
pub fn min_poly_of_power(m: &IntPolynomial, d: u32) -> Result<IntPolynomial> {
    let deg = m.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > DEGREE_CAP {
        return Err(Error::DegreeCap(deg, DEGREE_CAP));
    }
    if deg == 0 {
        return Err(Error::Precondition("constant polynomial has no root".into()));
    }
    let modulus = m.to_rat();
    let y = RatPoly::new(vec![BigRational::zero(), BigRational::one()]);
    let mut elem = RatPoly::one();
    for _ in 0..d {
        elem = elem.mul(&y).rem(&modulus);
    }
    let a = mult_matrix(&elem, &modulus);
    let cp = charpoly(&a);
    Ok(cp.clear_denominators().squarefree_part())
}

/// Minimal polynomial of beta + c/beta, beta a root of the irreducible m
/// with m(0) != 0.
pub fn min_poly_of_trace(m: &IntPolynomial, c: &BigInt) -> Result<IntPolynomial> {
    let deg = m.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > DEGREE_CAP {
        return Err(Error::DegreeCap(deg, DEGREE_CAP));
    }
    if m.constant_term().is_zero() {
        return Err(Error::Precondition("zero constant term: beta not invertible".into()));
    }
    let modulus = m.to_rat();
    // 1/y mod m: from m(y) = 0, y * (sum_{i>=1} m_i y^{i-1}) = -m_0.
    let m0 = modulus.coeff(0);
    let inv_y = RatPoly::new(
        (1..=deg).map(|i| modulus.coeff(i) * (-m0.clone()).recip()).collect(),
    );
    let elem = RatPoly::new(vec![BigRational::zero(), BigRational::one()])
        .add(&inv_y.scale(&BigRational::from_integer(c.clone())))
        .rem(&modulus);
    let a = mult_matrix(&elem, &modulus);
    let cp = charpoly(&a);
    Ok(cp.clear_denominators().squarefree_part())
}
