//! Factorization of integer polynomials over the rationals: squarefree
//! decomposition, then Zassenhaus (factor modulo a prime, Hensel lift,
//! subset recombination).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::intfact::is_prime_u64;
use super::minpoly::DEGREE_CAP;
use super::modpoly::{factor_squarefree_monic, ModPoly};
use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// content * prod factor_i^multiplicity_i == input; factors irreducible over
/// Q, primitive, positive leading coefficient, sorted for determinism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList {
    pub content: BigInt,
    pub factors: Vec<(IntPolynomial, u32)>,
}

impl FactorList {
    pub fn expand(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::new(vec![self.content.clone()]);
        for (f, m) in &self.factors {
            acc = acc.mul(&f.pow(*m));
        }
        acc
    }
}

pub fn int_poly_factor(f: &IntPolynomial) -> Result<FactorList> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > DEGREE_CAP {
        return Err(Error::DegreeCap(deg, DEGREE_CAP));
    }
    let content = f.content();
    let prim = f.primitive_part();
    let mut factors: Vec<(IntPolynomial, u32)> = Vec::new();

    // Root 0 comes off as powers of T.
    let tz = prim.trailing_zero_count();
    let body = prim.shift_down(tz);
    if tz > 0 {
        factors.push((IntPolynomial::from_i64(&[0, 1]), tz as u32));
    }

    for (g, mult) in squarefree_decomposition(&body) {
        for irred in factor_squarefree(&g)? {
            factors.push((irred, mult));
        }
    }
    factors.sort();
    Ok(FactorList { content, factors })
}

/// Yun's algorithm. Input primitive with positive leading coefficient;
/// returns primitive squarefree parts with their multiplicities.
fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let mut out = Vec::new();
    if f.degree().map(|d| d == 0).unwrap_or(true) {
        return out;
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.div_exact(&a).expect("gcd divides");
    let mut c = df.div_exact(&a).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut i = 1u32;
    while b.degree().map(|x| x > 0).unwrap_or(false) {
        let g = b.gcd(&d);
        if g.degree().map(|x| x > 0).unwrap_or(false) {
            out.push((g.clone(), i));
        }
        b = b.div_exact(&g).expect("gcd divides");
        c = d.div_exact(&g).expect("gcd divides");
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Factor a primitive squarefree polynomial into irreducibles over Q.
fn factor_squarefree(g: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let n = match g.degree() {
        None | Some(0) => return Ok(vec![]),
        Some(1) => return Ok(vec![g.clone()]),
        Some(n) => n,
    };
    // Monic transform: G(x) = lc^{n-1} g(x/lc), which is monic with integer
    // coefficients g_i lc^{n-1-i}.
    let lc = g.leading();
    let monic = {
        let mut v: Vec<BigInt> = (0..n).map(|i| g.coeff(i) * lc.pow((n - 1 - i) as u32)).collect();
        v.push(BigInt::one());
        IntPolynomial::new(v)
    };

    let factors_monic = factor_monic_squarefree(&monic)?;
    // Map back: factor of g is the primitive part of h(lc x).
    let mut out: Vec<IntPolynomial> = factors_monic
        .iter()
        .map(|h| {
            let d = h.degree().unwrap();
            IntPolynomial::new((0..=d).map(|i| h.coeff(i) * lc.pow(i as u32)).collect())
                .primitive_part()
        })
        .collect();
    out.sort();
    Ok(out)
}

fn factor_monic_squarefree(f: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let n = f.degree().unwrap();
    // Working prime: f mod q must stay squarefree.
    let q = (3u64..)
        .filter(|&q| is_prime_u64(q))
        .find(|&q| {
            let fq = reduce_mod(f, q);
            fq.degree() == n && fq.gcd(&fq.derivative()).degree() == 0
        })
        .unwrap();
    let fq = reduce_mod(f, q).monic();
    let modular = factor_squarefree_monic(&fq, 0x5eed);
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    // Lift to q^e beyond twice the Mignotte-style factor bound.
    let norm2_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << (n + 1)) * (norm2_sq.sqrt() + BigInt::one());
    let mut modulus = BigInt::from(q);
    let mut e = 1u32;
    while modulus < &bound * 2 + 1 {
        modulus *= q;
        e += 1;
    }
    let _ = e;
    let lifted = hensel_lift_tree(f, &modular, q, &modulus);

    // Subset recombination.
    let mut remaining: Vec<ZPoly> = lifted;
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, size) {
            let mut prod = ZPoly::one(&modulus);
            for &i in &combo {
                prod = prod.mul(&remaining[i]);
            }
            let cand = prod.symmetric_lift();
            if rest.is_divisible_by(&cand) {
                out.push(cand.clone());
                rest = rest.div_exact(&cand).expect("divides");
                let keep: Vec<ZPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, z)| z.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if rest.degree().map(|d| d > 0).unwrap_or(false) {
        out.push(rest);
    }
    Ok(out)
}

fn reduce_mod(f: &IntPolynomial, q: u64) -> ModPoly {
    let m = BigInt::from(q);
    ModPoly::new(
        q,
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(&m);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect(),
    )
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Polynomial over Z/modulus with centered lifting support. Coefficients kept
/// in [0, modulus).
#[derive(Clone, Debug)]
struct ZPoly {
    modulus: BigInt,
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    fn new(modulus: &BigInt, mut coeffs: Vec<BigInt>) -> Self {
        for c in coeffs.iter_mut() {
            *c = c.mod_floor(modulus);
        }
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        ZPoly { modulus: modulus.clone(), coeffs }
    }

    fn one(modulus: &BigInt) -> Self {
        ZPoly::new(modulus, vec![BigInt::one()])
    }

    fn from_int(f: &IntPolynomial, modulus: &BigInt) -> Self {
        ZPoly::new(modulus, f.coeffs().to_vec())
    }

    fn from_modpoly(f: &ModPoly, modulus: &BigInt) -> Self {
        ZPoly::new(modulus, f.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        ZPoly::new(
            &self.modulus,
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
                        + o.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
                })
                .collect(),
        )
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        ZPoly::new(
            &self.modulus,
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
                        - o.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
                })
                .collect(),
        )
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ZPoly::new(&self.modulus, vec![]);
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        ZPoly::new(&self.modulus, v)
    }

    /// Division with remainder by a monic divisor.
    fn divmod_monic(&self, div: &Self) -> (Self, Self) {
        debug_assert!(div.coeffs.last().map(|c| c.is_one()).unwrap_or(false));
        if self.is_zero() || self.degree() < div.degree() {
            return (ZPoly::new(&self.modulus, vec![]), self.clone());
        }
        let dd = div.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].mod_floor(&self.modulus);
            if c.is_zero() {
                rem[i] = BigInt::zero();
                continue;
            }
            quot[i - dd] = c.clone();
            for (j, d) in div.coeffs.iter().enumerate() {
                let t = &c * d;
                rem[i - dd + j] -= t;
            }
        }
        (ZPoly::new(&self.modulus, quot), ZPoly::new(&self.modulus, rem))
    }

    /// Reinterpret with coefficients in (-m/2, m/2] as an integer polynomial.
    fn symmetric_lift(&self) -> IntPolynomial {
        let half = &self.modulus / 2;
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| {
                    if c > &half {
                        c - &self.modulus
                    } else {
                        c.clone()
                    }
                })
                .collect(),
        )
    }

    fn with_modulus(&self, modulus: &BigInt) -> Self {
        ZPoly::new(modulus, self.coeffs.clone())
    }
}

/// Lift the monic modular factors of monic f from mod q to mod `modulus`
/// (a power of q), via a balanced factor tree and quadratic Hensel steps.
fn hensel_lift_tree(f: &IntPolynomial, modular: &[ModPoly], q: u64, modulus: &BigInt) -> Vec<ZPoly> {
    if modular.len() == 1 {
        return vec![ZPoly::from_int(f, modulus)];
    }
    let mid = modular.len() / 2;
    let (left, right) = modular.split_at(mid);
    let prod = |fs: &[ModPoly]| -> ModPoly {
        let mut acc = ModPoly::one(q);
        for g in fs {
            acc = acc.mul(g);
        }
        acc
    };
    let g0 = prod(left);
    let h0 = prod(right);
    // Bezout s*g0 + t*h0 = 1 mod q.
    let (s0, t0) = bezout_modpoly(&g0, &h0);
    let (g, h) = hensel_lift_pair(f, &g0, &h0, &s0, &t0, q, modulus);
    let gi = g.symmetric_lift();
    let hi = h.symmetric_lift();
    let mut out = hensel_lift_tree(&gi, left, q, modulus);
    out.extend(hensel_lift_tree(&hi, right, q, modulus));
    out
}

fn bezout_modpoly(a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly) {
    // Extended Euclid over F_q: s*a + t*b = 1 (a, b coprime).
    let q = a.q;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ModPoly::one(q), ModPoly::zero(q));
    let (mut t0, mut t1) = (ModPoly::zero(q), ModPoly::one(q));
    while !r1.is_zero() {
        let (qq, rr) = r0.divmod(&r1);
        let ns = s0.sub(&qq.mul(&s1));
        let nt = t0.sub(&qq.mul(&t1));
        r0 = r1;
        r1 = rr;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    // r0 is a nonzero constant; normalize to 1.
    assert_eq!(r0.degree(), 0);
    let inv = super::intfact::powmod(r0.lc(), q - 2, q);
    (s0.scale(inv), t0.scale(inv))
}

/// Quadratic Hensel lifting of f = g*h from mod q to mod `modulus` >= q.
fn hensel_lift_pair(
    f: &IntPolynomial,
    g0: &ModPoly,
    h0: &ModPoly,
    s0: &ModPoly,
    t0: &ModPoly,
    q: u64,
    modulus: &BigInt,
) -> (ZPoly, ZPoly) {
    let mut m = BigInt::from(q);
    let mut g = ZPoly::from_modpoly(g0, &m);
    let mut h = ZPoly::from_modpoly(h0, &m);
    let mut s = ZPoly::from_modpoly(s0, &m);
    let mut t = ZPoly::from_modpoly(t0, &m);
    while &m < modulus {
        let mm = &m * &m;
        let fz = ZPoly::from_int(f, &mm);
        let gz = g.with_modulus(&mm);
        let hz = h.with_modulus(&mm);
        let sz = s.with_modulus(&mm);
        let tz = t.with_modulus(&mm);
        let e = fz.sub(&gz.mul(&hz));
        let (qq, rr) = tz.mul(&e).divmod_monic(&gz);
        let g1 = gz.add(&rr);
        let h1 = hz.add(&sz.mul(&e)).add(&qq.mul(&hz));
        // Update the Bezout pair: with b = s g* + t h* - 1 (divisible by m),
        // s* = s - (s b rem h*), t* = t - t b - quo(s b, h*) g* restores
        // s* g* + t* h* = 1 mod m^2.
        let b = sz.mul(&g1).add(&tz.mul(&h1)).sub(&ZPoly::one(&mm));
        let (cc, dd) = sz.mul(&b).divmod_monic(&h1);
        let s1 = sz.sub(&dd);
        let t1 = tz.sub(&tz.mul(&b)).sub(&cc.mul(&g1));
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = mm;
    }
    (g.with_modulus(modulus), h.with_modulus(modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(v)
    }

    #[test]
    fn factor_x2_minus_1() {
        let fl = int_poly_factor(&poly(&[-1, 0, 1])).unwrap();
        assert_eq!(fl.content, BigInt::one());
        assert_eq!(
            fl.factors,
            vec![(poly(&[-1, 1]), 1), (poly(&[1, 1]), 1)]
        );
        assert_eq!(fl.expand(), poly(&[-1, 0, 1]));
    }

    #[test]
    fn cyclotomic_5_irreducible() {
        let f = poly(&[1, 1, 1, 1, 1]);
        let fl = int_poly_factor(&f).unwrap();
        assert_eq!(fl.factors, vec![(f.clone(), 1)]);
    }

    #[test]
    fn x2_plus_3_irreducible() {
        let f = poly(&[3, 0, 1]);
        let fl = int_poly_factor(&f).unwrap();
        assert_eq!(fl.factors, vec![(f, 1)]);
    }

    #[test]
    fn t20_minus_1() {
        // T^20 - 1 = prod of cyclotomics Phi_d, d | 20: six factors.
        let mut v = vec![0i64; 21];
        v[0] = -1;
        v[20] = 1;
        let f = poly(&v);
        let fl = int_poly_factor(&f).unwrap();
        assert_eq!(fl.factors.len(), 6);
        assert_eq!(fl.expand(), f);
    }

    #[test]
    fn multiplicities_and_content() {
        // 6 (T-1)^2 (T^2+1)
        let f = poly(&[-1, 1]).pow(2).mul(&poly(&[1, 0, 1])).scale(&BigInt::from(6));
        let fl = int_poly_factor(&f).unwrap();
        assert_eq!(fl.content, BigInt::from(6));
        assert_eq!(
            fl.factors,
            vec![(poly(&[-1, 1]), 2), (poly(&[1, 0, 1]), 1)]
        );
        assert_eq!(fl.expand(), f);
    }

    #[test]
    fn nonmonic_factorization() {
        // (2T+1)(3T-5)
        let f = poly(&[1, 2]).mul(&poly(&[-5, 3]));
        let fl = int_poly_factor(&f).unwrap();
        assert_eq!(fl.expand(), f);
        assert_eq!(fl.factors.len(), 2);
    }

    #[test]
    fn power_of_t() {
        let f = poly(&[0, 0, 0, 2]);
        let fl = int_poly_factor(&f).unwrap();
        assert_eq!(fl.content, BigInt::from(2));
        assert_eq!(fl.factors, vec![(poly(&[0, 1]), 3)]);
    }
}
