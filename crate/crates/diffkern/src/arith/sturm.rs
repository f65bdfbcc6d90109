//! Exact real-root counting by Sturm sequences over the rationals.
//!
//! Interval convention is (lo, hi]: a root exactly at hi is counted, one at
//! lo is not, so adjacent intervals partition the line.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::{IntPolynomial, RatPoly};
use crate::error::{Error, Result};

fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        if chain[n - 1].degree() == Some(0) {
            break;
        }
        let r = chain[n - 2].rem(&chain[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign variations of the chain at x, zeros ignored. Ignoring zeros makes
/// this the right-limit count V(x+), which is what the (lo, hi] convention
/// needs.
fn variations_at(chain: &[RatPoly], x: &BigRational) -> u64 {
    variations(chain.iter().map(|p| sign(&p.eval(x))))
}

/// Sign variations at +infinity (signs of leading coefficients) or
/// -infinity (flipped on odd degrees).
fn variations_at_infinity(chain: &[RatPoly], positive: bool) -> u64 {
    variations(chain.iter().map(|p| {
        let s = sign(&p.leading());
        match p.degree() {
            Some(d) if !positive && d % 2 == 1 => -s,
            _ => s,
        }
    }))
}

fn variations(signs: impl Iterator<Item = i8>) -> u64 {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of f in (lo, hi], plus whether every
/// complex root of f is real.
pub fn sturm_roots_in_interval(
    f: &IntPolynomial,
    lo: &BigRational,
    hi: &BigRational,
) -> Result<(u64, bool)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if lo > hi {
        return Err(Error::Precondition("lo > hi".into()));
    }
    let sf = f.squarefree_part();
    if sf.degree() == Some(0) {
        return Ok((0, true));
    }
    let chain = sturm_chain(&sf.to_rat());
    let count = variations_at(&chain, lo) - variations_at(&chain, hi);
    let total_real =
        variations_at_infinity(&chain, false) - variations_at_infinity(&chain, true);
    let all_real = total_real == sf.degree().unwrap() as u64;
    Ok((count, all_real))
}

/// Number of distinct real roots on the whole line.
pub fn real_root_count(f: &IntPolynomial) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = f.squarefree_part();
    if sf.degree() == Some(0) {
        return Ok(0);
    }
    let chain = sturm_chain(&sf.to_rat());
    Ok(variations_at_infinity(&chain, false) - variations_at_infinity(&chain, true))
}
