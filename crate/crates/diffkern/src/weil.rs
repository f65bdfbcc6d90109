//! Modularity of integer polynomials: a polynomial is modular when none of
//! its roots has all archimedean absolute values equal to a common power p^r.
//! The decision is exact — norm filter, power trick, and a Sturm-sequence
//! trace test; no floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::intfact::is_prime_u64;
use crate::arith::{
    int_poly_factor, min_poly_of_power, min_poly_of_trace, sturm_roots_in_interval,
    IntPolynomial,
};
use crate::error::{Error, Result};

/// Exponent weight r with |roots| = p^r, as a reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Weight {
    pub num: i64,
    pub den: u64,
}

impl Weight {
    fn new(num: i64, den: u64) -> Self {
        debug_assert!(den > 0);
        if num == 0 {
            return Weight { num: 0, den: 1 };
        }
        let g = (num.unsigned_abs()).gcd(&den);
        Weight {
            num: num / g as i64,
            den: den / g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "weight")]
pub enum WeilReason {
    /// |constant term / leading coefficient| is not an exact power of p.
    NormNotPPower,
    /// Norm filter passed but some embedding has the wrong absolute value.
    TraceTestFailed,
    WeilOfWeight(Weight),
}

/// Verdict for one irreducible factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeilVerdict {
    pub factor: IntPolynomial,
    pub multiplicity: u32,
    pub is_weil: bool,
    pub reason: WeilReason,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    pub input: IntPolynomial,
    pub p: u64,
    /// Multiplicity of the root 0 (stripped T-power), non-Weil by convention.
    pub root_zero_multiplicity: u32,
    pub verdicts: Vec<WeilVerdict>,
    pub is_modular: bool,
}

/// If |x| = p^k, returns Some(k); x must be nonzero.
fn power_of_p(x: &BigInt, p: u64) -> Option<u32> {
    let mut a = x.abs();
    let p = BigInt::from(p);
    let mut k = 0u32;
    while (&a % &p).is_zero() {
        a /= &p;
        k += 1;
    }
    if a.is_one() {
        Some(k)
    } else {
        None
    }
}

/// |m(0)/lc| as an exact signed power of p, when it is one.
fn norm_exponent(m: &IntPolynomial, p: u64) -> Option<i64> {
    let num = m.constant_term().abs();
    let den = m.leading().abs();
    let g = num.gcd(&den);
    let a = power_of_p(&(num / &g), p)?;
    let b = power_of_p(&(den / g), p)?;
    Some(a as i64 - b as i64)
}

/// Weil test for one irreducible factor with nonzero constant term.
///
/// The norm fixes the only possible weight r = k/d. The power trick replaces
/// the root alpha by beta = alpha^d, whose absolute values must all be p^k;
/// that holds iff t = beta + p^{2k}/beta is totally real with every conjugate
/// in [-2 p^k, 2 p^k] (endpoints correspond to beta = +-p^k).
pub fn weil_weight_of_factor(m: &IntPolynomial, p: u64) -> Result<WeilVerdict> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let d = match m.degree() {
        None | Some(0) => {
            return Err(Error::Precondition("factor must have positive degree".into()))
        }
        Some(d) => d,
    };
    if m.constant_term().is_zero() {
        return Err(Error::Precondition("constant term must be nonzero".into()));
    }
    {
        let fl = int_poly_factor(m)?;
        if fl.factors.len() != 1 || fl.factors[0].1 != 1 {
            return Err(Error::Reducible);
        }
    }

    let verdict = |is_weil: bool, reason: WeilReason| WeilVerdict {
        factor: m.clone(),
        multiplicity: 1,
        is_weil,
        reason,
    };

    let k = match norm_exponent(m, p) {
        Some(k) => k,
        None => return Ok(verdict(false, WeilReason::NormNotPPower)),
    };
    if d == 1 {
        // alpha = -m0/lc rational with |alpha| = p^k exactly: Weil outright.
        return Ok(verdict(true, WeilReason::WeilOfWeight(Weight::new(k, 1))));
    }

    // Negative candidate exponent: test the reversal (roots inverted), whose
    // candidate exponent is -k >= 0; the verdict transfers with weight k/d.
    let (work, kk) = if k < 0 {
        (m.reversal().primitive_part(), (-k) as u32)
    } else {
        (m.clone(), k as u32)
    };

    let beta_poly = min_poly_of_power(&work, d as u32)?;
    let pk = BigInt::from(p).pow(kk);
    let t_poly = min_poly_of_trace(&beta_poly, &(&pk * &pk))?;
    let lo = BigRational::from_integer(-2 * &pk);
    let hi = BigRational::from_integer(2 * pk);
    let (count, all_real) = sturm_roots_in_interval(&t_poly, &lo, &hi)?;
    let at_lo = if t_poly.eval_rat(&lo).is_zero() { 1 } else { 0 };
    let distinct = t_poly.degree().unwrap() as u64;
    if all_real && count + at_lo == distinct {
        Ok(verdict(
            true,
            WeilReason::WeilOfWeight(Weight::new(k, d as u64)),
        ))
    } else {
        Ok(verdict(false, WeilReason::TraceTestFailed))
    }
}

/// Factor P, strip the T-power (root 0, never Weil), and test every
/// irreducible factor. Modular iff no factor is Weil.
pub fn classify_modular(input: &IntPolynomial, p: u64) -> Result<ModularityReport> {
    if input.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let factored = int_poly_factor(input)?;
    let mut root_zero_multiplicity = 0;
    let mut verdicts = Vec::new();
    for (f, mult) in &factored.factors {
        if f.constant_term().is_zero() {
            // Factor list stores the stripped T-power as the factor T.
            root_zero_multiplicity += *mult;
            continue;
        }
        let mut v = weil_weight_of_factor(f, p)?;
        v.multiplicity = *mult;
        verdicts.push(v);
    }
    let is_modular = verdicts.iter().all(|v| !v.is_weil);
    Ok(ModularityReport {
        input: input.clone(),
        p,
        root_zero_multiplicity,
        verdicts,
        is_modular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn root_of_unity_is_weil_weight_zero() {
        let v = weil_weight_of_factor(&poly(&[-1, 1]), 7).unwrap();
        assert!(v.is_weil);
        assert_eq!(v.reason, WeilReason::WeilOfWeight(Weight { num: 0, den: 1 }));
    }

    #[test]
    fn frobenius_quadratic_weight_half() {
        // T^2 + 3T + 5, p = 5: t = -1 in [-10, 10]
        let v = weil_weight_of_factor(&poly(&[5, 3, 1]), 5).unwrap();
        assert!(v.is_weil);
        assert_eq!(v.reason, WeilReason::WeilOfWeight(Weight { num: 1, den: 2 }));
    }

    #[test]
    fn norm_filter_rejects() {
        let v = weil_weight_of_factor(&poly(&[-2, 1]), 5).unwrap();
        assert!(!v.is_weil);
        assert_eq!(v.reason, WeilReason::NormNotPPower);
    }

    #[test]
    fn trace_test_rejects_real_quadratic() {
        // T^2 - 3T + 2 is reducible; use T^2 - 5T + 5 (roots (5 +- sqrt5)/2,
        // real, product 5, but absolute values differ) at p = 5.
        let v = weil_weight_of_factor(&poly(&[5, -5, 1]), 5).unwrap();
        assert!(!v.is_weil);
        assert_eq!(v.reason, WeilReason::TraceTestFailed);
    }

    #[test]
    fn reducible_rejected() {
        assert!(matches!(
            weil_weight_of_factor(&poly(&[-1, 0, 1]), 5),
            Err(Error::Reducible)
        ));
    }

    #[test]
    fn negative_weight_root() {
        // 5T - 1: root 1/5 = 5^{-1}, Weil of weight -1 at p = 5.
        let v = weil_weight_of_factor(&poly(&[-1, 5]), 5).unwrap();
        assert!(v.is_weil);
        assert_eq!(v.reason, WeilReason::WeilOfWeight(Weight { num: -1, den: 1 }));
        // 5T^2 + T + 1 has |norm| = 1/5 but roots of unequal modulus... its
        // roots have product 1/5 and are complex conjugates, so both have
        // modulus 5^{-1/2}: Weil of weight -1/2.
        let v = weil_weight_of_factor(&poly(&[1, 1, 5]), 5).unwrap();
        assert!(v.is_weil);
        assert_eq!(v.reason, WeilReason::WeilOfWeight(Weight { num: -1, den: 2 }));
    }

    #[test]
    fn classify_examples() {
        // T - p: not modular (weight 1)
        let r = classify_modular(&poly(&[-5, 1]), 5).unwrap();
        assert!(!r.is_modular);
        // 5th cyclotomic: not modular (weight 0)
        let r = classify_modular(&poly(&[1, 1, 1, 1, 1]), 3).unwrap();
        assert!(!r.is_modular);
        // T - 3 at p = 2: modular
        let r = classify_modular(&poly(&[-3, 1]), 2).unwrap();
        assert!(r.is_modular);
        assert_eq!(r.verdicts.len(), 1);
        // T^2 * (T - 3) at p = 2: still modular, root 0 recorded
        let r = classify_modular(&poly(&[0, 0, -3, 1]), 2).unwrap();
        assert!(r.is_modular);
        assert_eq!(r.root_zero_multiplicity, 2);
    }

    #[test]
    fn divisors_of_tn_minus_1_not_modular() {
        for n in 1..=20usize {
            let mut c = vec![0i64; n + 1];
            c[0] = -1;
            c[n] = 1;
            let r = classify_modular(&poly(&c), 2).unwrap();
            assert!(!r.is_modular, "T^{n} - 1 must not be modular");
            for v in &r.verdicts {
                assert!(v.is_weil);
                assert_eq!(v.reason, WeilReason::WeilOfWeight(Weight { num: 0, den: 1 }));
            }
        }
    }

    #[test]
    fn reversal_stability_weight_zero() {
        // (T^2 + T + 1)(T - 3): reversal has the same modularity verdict at
        // p = 2 since the weight-0 root set is inversion-closed.
        let f = poly(&[1, 1, 1]).mul(&poly(&[-3, 1]));
        let a = classify_modular(&f, 2).unwrap();
        let b = classify_modular(&f.reversal(), 2).unwrap();
        assert_eq!(a.is_modular, b.is_modular);
    }
}
