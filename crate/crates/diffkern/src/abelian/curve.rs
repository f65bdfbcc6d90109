//! Elliptic curves over prime fields in general Weierstrass form, with the
//! group law over arbitrary extension fields, naive point counting, and the
//! trace recurrence for counts over extensions.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::intfact::{is_prime_u64, mulmod};
use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::ff::{field_create, solve_artin_schreier, sqrt, FFElem, FieldCtx};

pub const COUNTING_CAP: u64 = 10_000;

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticCurve {
    pub p: u64,
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
    pub a4: u64,
    pub a6: u64,
}

impl EllipticCurve {
    pub fn new(p: u64, a1: u64, a2: u64, a3: u64, a4: u64, a6: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let e = EllipticCurve {
            p,
            a1: a1 % p,
            a2: a2 % p,
            a3: a3 % p,
            a4: a4 % p,
            a6: a6 % p,
        };
        if e.discriminant() == 0 {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    /// Short form y^2 = x^3 + a4 x + a6 (requires p >= 5).
    pub fn short(p: u64, a4: i64, a6: i64) -> Result<Self> {
        if p < 5 {
            return Err(Error::Precondition(
                "short Weierstrass form needs p >= 5; pass a1..a6".into(),
            ));
        }
        let r = |v: i64| v.rem_euclid(p as i64) as u64;
        Self::new(p, 0, 0, 0, r(a4), r(a6))
    }

    pub fn discriminant(&self) -> u64 {
        let p = self.p;
        let m = |a: u64, b: u64| mulmod(a, b, p);
        let add = |a: u64, b: u64| (a + b) % p;
        let neg = |a: u64| (p - a % p) % p;
        let b2 = add(m(self.a1, self.a1), m(4 % p, self.a2));
        let b4 = add(m(2 % p, self.a4), m(self.a1, self.a3));
        let b6 = add(m(self.a3, self.a3), m(4 % p, self.a6));
        // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        let b8 = add(
            add(m(m(self.a1, self.a1), self.a6), m(m(4 % p, self.a2), self.a6)),
            add(
                add(neg(m(m(self.a1, self.a3), self.a4)), m(self.a2, m(self.a3, self.a3))),
                neg(m(self.a4, self.a4)),
            ),
        );
        // disc = -b2^2 b8 - 8 b4^3 + 9 b2 b4 b6 - 27 b6^2
        let t1 = neg(m(m(b2, b2), b8));
        let t2 = neg(m(8 % p, m(b4, m(b4, b4))));
        let t3 = m(9 % p, m(b2, m(b4, b6)));
        let t4 = neg(m(27 % p, m(b6, b6)));
        add(add(t1, t2), add(t3, t4))
    }
}

/// Affine point or the point at infinity.
pub type Point = Option<(FFElem, FFElem)>;

/// The curve's group over a chosen extension F_{p^m}.
pub struct CurveGroup {
    pub curve: EllipticCurve,
    pub field: FieldCtx,
    a1: FFElem,
    a2: FFElem,
    a3: FFElem,
    a4: FFElem,
    a6: FFElem,
}

impl CurveGroup {
    pub fn new(curve: &EllipticCurve, field: &FieldCtx) -> Result<Self> {
        if field.p() != curve.p {
            return Err(Error::Precondition("field characteristic differs from curve".into()));
        }
        let f = |v: u64| field.from_int(v as i64);
        Ok(CurveGroup {
            curve: curve.clone(),
            field: field.clone(),
            a1: f(curve.a1),
            a2: f(curve.a2),
            a3: f(curve.a3),
            a4: f(curve.a4),
            a6: f(curve.a6),
        })
    }

    fn rhs(&self, x: &FFElem) -> FFElem {
        // x^3 + a2 x^2 + a4 x + a6
        x.mul(x).mul(x)
            .add(&self.a2.mul(&x.mul(x)))
            .add(&self.a4.mul(x))
            .add(&self.a6)
    }

    pub fn is_on_curve(&self, pt: &Point) -> bool {
        match pt {
            None => true,
            Some((x, y)) => {
                let lhs = y.mul(y).add(&self.a1.mul(x).mul(y)).add(&self.a3.mul(y));
                lhs == self.rhs(x)
            }
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        pt.as_ref().map(|(x, y)| {
            let ny = y.neg().sub(&self.a1.mul(x)).sub(&self.a3);
            (x.clone(), ny)
        })
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1) = match p {
            None => return q.clone(),
            Some(t) => t,
        };
        let (x2, y2) = match q {
            None => return p.clone(),
            Some(t) => t,
        };
        if x1 == x2 && y1.add(y2).add(&self.a1.mul(x2)).add(&self.a3).is_zero() {
            return None;
        }
        let (lambda, nu) = if x1 != x2 {
            let d = x2.sub(x1).inv().unwrap();
            let lambda = y2.sub(y1).mul(&d);
            let nu = y1.mul(x2).sub(&y2.mul(x1)).mul(&d);
            (lambda, nu)
        } else {
            let den = y1.add(y1).add(&self.a1.mul(x1)).add(&self.a3).inv().unwrap();
            let three = self.field.from_int(3);
            let two = self.field.from_int(2);
            let lambda = three
                .mul(&x1.mul(x1))
                .add(&two.mul(&self.a2).mul(x1))
                .add(&self.a4)
                .sub(&self.a1.mul(y1))
                .mul(&den);
            let nu = x1.mul(x1).mul(x1).neg()
                .add(&self.a4.mul(x1))
                .add(&two.mul(&self.a6))
                .sub(&self.a3.mul(y1))
                .mul(&den);
            (lambda, nu)
        };
        let x3 = lambda.mul(&lambda).add(&self.a1.mul(&lambda)).sub(&self.a2).sub(x1).sub(x2);
        let y3 = lambda.add(&self.a1).mul(&x3).neg().sub(&nu).sub(&self.a3);
        Some((x3, y3))
    }

    pub fn scalar_mul(&self, n: &BigInt, p: &Point) -> Point {
        if n.is_negative() {
            return self.neg(&self.scalar_mul(&n.abs(), p));
        }
        let mut acc: Point = None;
        let mut base = p.clone();
        let mag = n.magnitude();
        for i in 0..mag.bits() {
            if mag.bit(i) {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
        }
        acc
    }

    /// Number of y with y^2 + (a1 x + a3) y = rhs(x), for one x.
    fn fiber_size(&self, x: &FFElem) -> u64 {
        let c = self.a1.mul(x).add(&self.a3);
        let d = self.rhs(x);
        if self.field.p() == 2 {
            if c.is_zero() {
                1 // squaring is a bijection
            } else {
                let t = d.mul(&c.inv().unwrap().pow(2));
                if solve_artin_schreier(&t).is_some() {
                    2
                } else {
                    0
                }
            }
        } else {
            // complete the square: z^2 = d + (c/2)^2
            let half = self.field.from_int((self.field.p() as i64 + 1) / 2);
            let h = c.mul(&half);
            let disc = d.add(&h.mul(&h));
            if disc.is_zero() {
                1
            } else if disc.pow(self.field.group_order() / 2).is_one() {
                2
            } else {
                0
            }
        }
    }

    /// Exhaustive point count (including infinity); field size capped.
    pub fn count_points(&self) -> Result<u64> {
        if self.field.size() > COUNTING_CAP {
            return Err(Error::CountingCap(self.field.size()));
        }
        let mut n = 1u64;
        for x in self.field.iter_elems() {
            n += self.fiber_size(&x);
        }
        Ok(n)
    }

    /// Uniform random affine point, by random x and solving the fiber.
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        use rand::Rng;
        loop {
            let x = self.field.random_elem(rng);
            let c = self.a1.mul(&x).add(&self.a3);
            let d = self.rhs(&x);
            let y = if self.field.p() == 2 {
                if c.is_zero() {
                    // unique square root in char 2
                    let mut r = d.clone();
                    for _ in 1..self.field.m() {
                        r = r.mul(&r);
                    }
                    Some(r)
                } else {
                    let t = d.mul(&c.inv().unwrap().pow(2));
                    solve_artin_schreier(&t).map(|z| {
                        let z = if rng.gen_bool(0.5) { z.add(&self.field.one()) } else { z };
                        c.mul(&z)
                    })
                }
            } else {
                let half = self.field.from_int((self.field.p() as i64 + 1) / 2);
                let h = c.mul(&half);
                let disc = d.add(&h.mul(&h));
                sqrt(&disc).map(|z| {
                    let z = if rng.gen_bool(0.5) { z.neg() } else { z };
                    z.sub(&h)
                })
            };
            if let Some(y) = y {
                let pt = Some((x, y));
                debug_assert!(self.is_on_curve(&pt));
                return pt;
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusData {
    pub q: u64,
    pub trace: i64,
    pub charpoly: IntPolynomial,
    pub is_supersingular: bool,
    /// N_1, ..., N_{m_max}.
    #[serde(serialize_with = "crate::serde_util::bigint_vec_string")]
    pub counts: Vec<BigInt>,
}

/// Count E(F_p) naively.
pub fn ec_point_count(e: &EllipticCurve) -> Result<u64> {
    if e.p > COUNTING_CAP {
        return Err(Error::CountingCap(e.p));
    }
    let field = field_create(e.p, 1)?;
    CurveGroup::new(e, &field)?.count_points()
}

/// Counts over all F_{q^m} for m <= m_max, from N_1 via the trace recurrence
/// s_{m+1} = a s_m - q s_{m-1}, N_m = q^m + 1 - s_m.
pub fn frobenius_data(e: &EllipticCurve, m_max: u32) -> Result<FrobeniusData> {
    let n1 = ec_point_count(e)?;
    let q = e.p;
    let trace = q as i64 + 1 - n1 as i64;
    // Hasse: a^2 <= 4q
    debug_assert!((trace as i128) * (trace as i128) <= 4 * q as i128);
    let charpoly = IntPolynomial::new(vec![
        BigInt::from(q),
        BigInt::from(-trace),
        BigInt::from(1),
    ]);
    let mut counts = Vec::with_capacity(m_max as usize);
    let qb = BigInt::from(q);
    let ab = BigInt::from(trace);
    let mut s_prev = BigInt::from(2); // s_0
    let mut s_cur = ab.clone(); // s_1
    let mut qm = BigInt::from(1);
    for _ in 1..=m_max {
        qm *= &qb;
        counts.push(&qm + 1 - &s_cur);
        let s_next = &ab * &s_cur - &qb * &s_prev;
        s_prev = std::mem::replace(&mut s_cur, s_next);
    }
    Ok(FrobeniusData {
        q,
        trace,
        charpoly,
        is_supersingular: trace.rem_euclid(q as i64) == 0,
        counts,
    })
}

/// N_m alone, as a BigInt (recurrence, no counting).
pub fn count_at_level(trace: i64, q: u64, m: u32) -> BigInt {
    let qb = BigInt::from(q);
    let ab = BigInt::from(trace);
    let mut s_prev = BigInt::from(2);
    let mut s_cur = ab.clone();
    let mut qm = BigInt::from(1);
    let mut out = BigInt::zero();
    for _ in 1..=m {
        qm *= &qb;
        out = &qm + 1 - &s_cur;
        let s_next = &ab * &s_cur - &qb * &s_prev;
        s_prev = std::mem::replace(&mut s_cur, s_next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;

    fn e_f5() -> EllipticCurve {
        EllipticCurve::short(5, 1, 1).unwrap()
    }
    fn e_f7() -> EllipticCurve {
        EllipticCurve::short(7, 1, 0).unwrap()
    }
    fn e_f2() -> EllipticCurve {
        // y^2 + y = x^3 + x
        EllipticCurve::new(2, 0, 0, 1, 1, 0).unwrap()
    }

    #[test]
    fn counts_match_spec() {
        assert_eq!(ec_point_count(&e_f5()).unwrap(), 9);
        assert_eq!(ec_point_count(&e_f7()).unwrap(), 8);
        assert_eq!(ec_point_count(&e_f2()).unwrap(), 5);
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(EllipticCurve::short(5, 0, 0), Err(Error::SingularCurve)));
    }

    #[test]
    fn frobenius_data_examples() {
        let d = frobenius_data(&e_f5(), 2).unwrap();
        assert_eq!(d.trace, -3);
        assert_eq!(d.charpoly, IntPolynomial::from_i64(&[5, 3, 1]));
        assert_eq!(d.counts[1], BigInt::from(27));
        assert!(!d.is_supersingular);

        let d = frobenius_data(&e_f7(), 4).unwrap();
        assert_eq!(d.trace, 0);
        assert!(d.is_supersingular);
        assert_eq!(d.counts[3], BigInt::from(2304));

        let d = frobenius_data(&e_f2(), 4).unwrap();
        assert_eq!(d.trace, -2);
        assert_eq!(d.charpoly, IntPolynomial::from_i64(&[2, 2, 1]));
        assert_eq!(d.counts[3], BigInt::from(25));
    }

    #[test]
    fn recurrence_matches_extension_counts() {
        for e in [e_f5(), e_f7(), e_f2()] {
            let d = frobenius_data(&e, 2).unwrap();
            for m in 1..=2u32 {
                if e.p.pow(m) > COUNTING_CAP {
                    continue;
                }
                let field = field_create(e.p, m).unwrap();
                let g = CurveGroup::new(&e, &field).unwrap();
                assert_eq!(
                    BigInt::from(g.count_points().unwrap()),
                    d.counts[(m - 1) as usize],
                    "curve over p={} at m={}",
                    e.p,
                    m
                );
            }
        }
    }

    #[test]
    fn group_law_axioms() {
        for e in [e_f5(), e_f7(), e_f2()] {
            let field = field_create(e.p, 2).unwrap();
            let g = CurveGroup::new(&e, &field).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                let p = g.random_point(&mut rng);
                let q = g.random_point(&mut rng);
                let r = g.random_point(&mut rng);
                assert!(g.is_on_curve(&g.add(&p, &q)));
                // associativity
                assert_eq!(g.add(&g.add(&p, &q), &r), g.add(&p, &g.add(&q, &r)));
                // inverses and identity
                assert_eq!(g.add(&p, &g.neg(&p)), None);
                assert_eq!(g.add(&p, &None), p);
            }
        }
    }

    #[test]
    fn scalar_mul_order_divides_count() {
        let e = e_f5();
        let field = field_create(5, 1).unwrap();
        let g = CurveGroup::new(&e, &field).unwrap();
        let n = BigInt::from(ec_point_count(&e).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let p = g.random_point(&mut rng);
            assert_eq!(g.scalar_mul(&n, &p), None);
        }
    }
}
