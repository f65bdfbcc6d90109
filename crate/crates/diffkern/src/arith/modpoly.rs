//! Dense polynomials over F_q (q a machine-word prime), used by the
//! Zassenhaus factorization to factor modulo a prime.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::intfact::{mulmod, powmod};

/// Coefficients ascending, trailing zeros stripped, all reduced mod q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPoly {
    pub q: u64,
    pub coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(q: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { q, coeffs }
    }

    pub fn zero(q: u64) -> Self {
        ModPoly { q, coeffs: vec![] }
    }

    pub fn one(q: u64) -> Self {
        ModPoly { q, coeffs: vec![1] }
    }

    pub fn x(q: u64) -> Self {
        ModPoly { q, coeffs: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (a + b) % q;
        }
        ModPoly::new(q, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let q = self.q;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (a + q - b) % q;
        }
        ModPoly::new(q, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.q);
        }
        let q = self.q;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, q)) % q;
            }
        }
        ModPoly::new(q, out)
    }

    pub fn scale(&self, c: u64) -> Self {
        let q = self.q;
        ModPoly::new(q, self.coeffs.iter().map(|&a| mulmod(a, c, q)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = powmod(self.lc(), self.q - 2, self.q);
        self.scale(inv)
    }

    /// Division with remainder; divisor must be nonzero.
    pub fn divmod(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero());
        let q = self.q;
        if self.degree() < div.degree() || self.is_zero() {
            return (ModPoly::zero(q), self.clone());
        }
        let inv_lc = powmod(div.lc(), q - 2, q);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.degree() - div.degree() + 1];
        for i in (div.degree()..rem.len()).rev() {
            let c = mulmod(rem[i], inv_lc, q);
            if c == 0 {
                continue;
            }
            quot[i - div.degree()] = c;
            for (j, &d) in div.coeffs.iter().enumerate() {
                let idx = i - div.degree() + j;
                rem[idx] = (rem[idx] + q - mulmod(c, d, q)) % q;
            }
        }
        (ModPoly::new(q, quot), ModPoly::new(q, rem))
    }

    pub fn rem(&self, div: &Self) -> Self {
        self.divmod(div).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Self {
        let q = self.q;
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(i as u64 % q, c, q))
            .collect();
        ModPoly::new(q, out)
    }

    /// self^e mod m.
    pub fn powmod_poly(&self, e: &BigUint, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.q);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }
}

/// Cantor-Zassenhaus factorization of a squarefree monic polynomial over F_q
/// (q odd). Returns monic irreducible factors, sorted for determinism.
pub fn factor_squarefree_monic(f: &ModPoly, seed: u64) -> Vec<ModPoly> {
    assert!(f.q > 2, "pick an odd working prime");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    // Distinct-degree split.
    let mut h = ModPoly::x(f.q);
    let mut rest = f.monic();
    let mut d = 0usize;
    while !rest.is_zero() && rest.degree() > 0 {
        d += 1;
        if 2 * d > rest.degree() {
            out.push(rest.clone());
            break;
        }
        h = h.powmod_poly(&BigUint::from(f.q), &rest);
        let g = h.sub(&ModPoly::x(f.q)).gcd(&rest);
        if g.degree() > 0 {
            equal_degree_split(&g, d, &mut rng, &mut out);
            rest = rest.divmod(&g).0;
            h = h.rem(&rest);
        }
    }
    out.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
    out
}

fn equal_degree_split(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<ModPoly>) {
    if f.degree() == d {
        out.push(f.monic());
        return;
    }
    let q = f.q;
    let exp = (BigUint::from(q).pow(d as u32) - BigUint::one()) / 2u32;
    loop {
        let coeffs: Vec<u64> = (0..f.degree()).map(|_| rng.gen_range(0..q)).collect();
        let h = ModPoly::new(q, coeffs);
        if h.is_zero() {
            continue;
        }
        let g0 = h.gcd(f);
        if g0.degree() > 0 && g0.degree() < f.degree() {
            equal_degree_split(&g0, d, rng, out);
            equal_degree_split(&f.divmod(&g0).0.monic(), d, rng, out);
            return;
        }
        let pw = h.powmod_poly(&exp, f).sub(&ModPoly::one(q));
        let g = pw.gcd(f);
        if g.degree() > 0 && g.degree() < f.degree() {
            equal_degree_split(&g, d, rng, out);
            equal_degree_split(&f.divmod(&g).0.monic(), d, rng, out);
            return;
        }
    }
}
