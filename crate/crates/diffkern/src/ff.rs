//! Explicit finite fields F_{p^m} = F_p[x]/(modulus): Frobenius, element
//! orders, and root-of-unity enumeration. The modulus is chosen
//! deterministically so every certificate reproduces bit-for-bit.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::intfact::{factor_u64, is_prime_u64, mult_order_mod};
use crate::arith::modpoly::ModPoly;
use crate::error::{Error, Result};

#[derive(Debug)]
struct FieldInner {
    p: u64,
    m: u32,
    /// Monic irreducible of degree m, ascending coefficients mod p.
    modulus: ModPoly,
    /// p^m - 1 (fits u64: field size is capped below 2^63).
    group_order: u64,
    group_order_factors: Vec<(u64, u32)>,
    generator_coeffs: Vec<u64>,
}

/// A finite field F_{p^m}; cheap to clone (shared immutable state).
#[derive(Clone, Debug)]
pub struct FieldCtx(Arc<FieldInner>);

/// An element of F_{p^m}: residue of degree < m, coefficients mod p.
#[derive(Clone, PartialEq, Eq)]
pub struct FFElem {
    coeffs: Vec<u64>, // exactly m entries
    ctx: FieldCtx,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}
impl Eq for FieldCtx {}
impl std::hash::Hash for FFElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

const FIELD_SIZE_CAP_BITS: u32 = 63;

/// Smallest monic irreducible of degree m over F_p, ordering candidates by
/// the integer encoding of the ascending lower-coefficient vector.
fn lex_min_irreducible(p: u64, m: u32) -> ModPoly {
    if m == 1 {
        return ModPoly::new(p, vec![0, 1]); // x itself
    }
    let mut lower = vec![0u64; m as usize];
    loop {
        let mut coeffs = lower.clone();
        coeffs.push(1);
        let f = ModPoly::new(p, coeffs);
        if is_irreducible(&f) {
            return f;
        }
        // increment the base-p counter (c_0 fastest)
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < m as usize, "no irreducible of degree {m} found");
        }
    }
}

/// Monic f of degree m is irreducible iff it shares no root with any
/// x^{p^j} - x for j <= m/2 (no irreducible factor of small degree).
fn is_irreducible(f: &ModPoly) -> bool {
    let p = f.q;
    let m = f.degree();
    let mut s = ModPoly::x(p).rem(f);
    for _ in 1..=m / 2 {
        s = s.powmod_poly(&BigUint::from(p), f);
        let g = f.gcd(&s.sub(&ModPoly::x(p)));
        if g.degree() > 0 {
            return false;
        }
    }
    true
}

/// Build F_{p^m}: deterministic modulus, then a generator by seeded random
/// search with exact order verification against the factored group order.
pub fn field_create(p: u64, m: u32) -> Result<FieldCtx> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 || m > 64 {
        return Err(Error::Precondition("extension degree must be in 1..=64".into()));
    }
    // cap p^m below 2^63
    if (m as f64) * (p as f64).log2() > FIELD_SIZE_CAP_BITS as f64 {
        return Err(Error::FieldSizeCap(p, m));
    }
    let size = p.checked_pow(m).ok_or(Error::FieldSizeCap(p, m))?;
    let modulus = lex_min_irreducible(p, m);
    let group_order = size - 1;
    let group_order_factors: Vec<(u64, u32)> =
        factor_u64(group_order).into_iter().collect();

    let inner_no_gen = FieldInner {
        p,
        m,
        modulus: modulus.clone(),
        group_order,
        group_order_factors: group_order_factors.clone(),
        generator_coeffs: vec![0; m as usize],
    };
    let generator_coeffs = find_generator(&inner_no_gen);
    Ok(FieldCtx(Arc::new(FieldInner {
        generator_coeffs,
        ..inner_no_gen
    })))
}

fn find_generator(f: &FieldInner) -> Vec<u64> {
    if f.group_order == 1 {
        return one_coeffs(f.m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(f.p.wrapping_mul(0x9E37_79B9).wrapping_add(f.m as u64));
    loop {
        let coeffs: Vec<u64> = (0..f.m).map(|_| rng.gen_range(0..f.p)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let x = ModPoly::new(f.p, coeffs.clone());
        let is_gen = f.group_order_factors.iter().all(|&(r, _)| {
            let e = BigUint::from(f.group_order / r);
            !x.powmod_poly(&e, &f.modulus).sub(&ModPoly::one(f.p)).is_zero()
        });
        if is_gen {
            let mut c = coeffs;
            c.resize(f.m as usize, 0);
            return c;
        }
    }
}

fn one_coeffs(m: u32) -> Vec<u64> {
    let mut c = vec![0; m as usize];
    c[0] = 1;
    c
}

impl FieldCtx {
    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    pub fn size(&self) -> u64 {
        self.0.group_order + 1
    }
    pub fn group_order(&self) -> u64 {
        self.0.group_order
    }
    pub fn modulus(&self) -> &ModPoly {
        &self.0.modulus
    }

    fn wrap(&self, poly: ModPoly) -> FFElem {
        let mut coeffs = poly.rem(&self.0.modulus).coeffs;
        coeffs.resize(self.0.m as usize, 0);
        FFElem { coeffs, ctx: self.clone() }
    }

    pub fn zero(&self) -> FFElem {
        FFElem { coeffs: vec![0; self.0.m as usize], ctx: self.clone() }
    }
    pub fn one(&self) -> FFElem {
        FFElem { coeffs: one_coeffs(self.0.m), ctx: self.clone() }
    }
    /// Image of an integer under Z -> F_p -> F_{p^m}.
    pub fn from_int(&self, n: i64) -> FFElem {
        let r = n.rem_euclid(self.0.p as i64) as u64;
        let mut c = vec![0; self.0.m as usize];
        c[0] = r;
        FFElem { coeffs: c, ctx: self.clone() }
    }
    /// Element with the given ascending coefficients (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FFElem> {
        if coeffs.len() > self.0.m as usize {
            return Err(Error::Precondition("too many coefficients".into()));
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&v| v % self.0.p).collect();
        c.resize(self.0.m as usize, 0);
        Ok(FFElem { coeffs: c, ctx: self.clone() })
    }
    pub fn generator(&self) -> FFElem {
        FFElem { coeffs: self.0.generator_coeffs.clone(), ctx: self.clone() }
    }
    pub fn random_elem(&self, rng: &mut ChaCha8Rng) -> FFElem {
        let coeffs = (0..self.0.m).map(|_| rng.gen_range(0..self.0.p)).collect();
        FFElem { coeffs, ctx: self.clone() }
    }
    /// All field elements, in coefficient-counter order. Only for small fields.
    pub fn iter_elems(&self) -> impl Iterator<Item = FFElem> + '_ {
        let p = self.0.p;
        let m = self.0.m as usize;
        (0..self.size()).map(move |mut n| {
            let mut c = vec![0u64; m];
            for ci in c.iter_mut() {
                *ci = n % p;
                n /= p;
            }
            FFElem { coeffs: c, ctx: self.clone() }
        })
    }
}

impl FFElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }
    fn poly(&self) -> ModPoly {
        ModPoly::new(self.ctx.0.p, self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.ctx.wrap(self.poly().add(&other.poly()))
    }
    pub fn sub(&self, other: &Self) -> Self {
        self.ctx.wrap(self.poly().sub(&other.poly()))
    }
    pub fn neg(&self) -> Self {
        self.ctx.wrap(ModPoly::zero(self.ctx.0.p).sub(&self.poly()))
    }
    pub fn mul(&self, other: &Self) -> Self {
        self.ctx.wrap(self.poly().mul(&other.poly()))
    }
    pub fn pow(&self, e: u64) -> Self {
        self.ctx.wrap(self.poly().powmod_poly(&BigUint::from(e), &self.ctx.0.modulus))
    }
    pub fn pow_big(&self, e: &BigUint) -> Self {
        self.ctx.wrap(self.poly().powmod_poly(e, &self.ctx.0.modulus))
    }
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.ctx.0.group_order - 1))
    }
}

/// x^{p^t}, by t successive p-th powerings.
pub fn frobenius_apply(x: &FFElem, t: u32) -> FFElem {
    let p = x.ctx.0.p;
    let mut cur = x.clone();
    for _ in 0..t {
        cur = cur.pow(p);
    }
    cur
}

/// Exact multiplicative order, descending prime-by-prime from p^m - 1.
pub fn mult_order(x: &FFElem) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut ord = x.ctx.0.group_order;
    for &(r, e) in &x.ctx.0.group_order_factors {
        for _ in 0..e {
            if x.pow(ord / r).is_one() {
                ord /= r;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

/// The N-th roots of unity: the N powers of g^{(p^m-1)/N}. Errors when N
/// does not divide the group order, naming the minimal valid degree.
pub fn roots_of_unity(ctx: &FieldCtx, n: u64) -> Result<Vec<FFElem>> {
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    if ctx.group_order() % n != 0 {
        let minimal_m = mult_order_mod(ctx.p() % n, n) as u32;
        return Err(Error::RootOfUnityDegree { n, minimal_m });
    }
    let zeta = ctx.generator().pow(ctx.group_order() / n);
    let mut out = Vec::with_capacity(n as usize);
    let mut cur = ctx.one();
    for _ in 0..n {
        out.push(cur.clone());
        cur = cur.mul(&zeta);
    }
    Ok(out)
}

/// Square root in F_{p^m}, p odd, by Tonelli-Shanks with the field generator
/// as the guaranteed non-residue. Returns None for non-squares.
pub fn sqrt(x: &FFElem) -> Option<FFElem> {
    let ctx = x.ctx.clone();
    let p = ctx.0.p;
    assert!(p != 2, "use the char-2 quadratic solver instead");
    if x.is_zero() {
        return Some(x.clone());
    }
    let q = ctx.0.group_order;
    // Euler criterion.
    if !x.pow(q / 2).is_one() {
        return None;
    }
    let s = q.trailing_zeros();
    let t = q >> s; // odd
    let z = ctx.generator().pow(t); // order 2^s
    let mut m = s;
    let mut c = z;
    let mut u = x.pow(t);
    let mut r = x.pow((t + 1) / 2);
    while !u.is_one() {
        // find least i with u^{2^i} = 1
        let mut i = 0;
        let mut tmp = u.clone();
        while !tmp.is_one() {
            tmp = tmp.mul(&tmp);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = b.mul(&b);
        }
        m = i;
        c = b.mul(&b);
        u = u.mul(&c);
        r = r.mul(&b);
    }
    Some(r)
}

/// Solve y^2 + y = d in characteristic 2, by F_2-linear algebra on the map
/// y -> y^2 + y over the coefficient basis. Returns None when absolute trace
/// of d is 1 (no solution).
pub fn solve_artin_schreier(d: &FFElem) -> Option<FFElem> {
    let ctx = d.ctx.clone();
    assert_eq!(ctx.p(), 2);
    let m = ctx.m() as usize;
    // columns: image of basis vector e_i under y -> y^2 + y
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut c = vec![0u64; m];
        c[i] = 1;
        let e = ctx.from_coeffs(&c).unwrap();
        let img = e.mul(&e).add(&e);
        cols.push(img.coeffs().to_vec());
    }
    // solve A y = d over F_2 (A given by columns), Gaussian elimination
    let mut a = vec![vec![0u64; m + 1]; m];
    for r in 0..m {
        for (c, col) in cols.iter().enumerate() {
            a[r][c] = col[r];
        }
        a[r][m] = d.coeffs()[r];
    }
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..m {
        if let Some(pr) = (row..m).find(|&r| a[r][col] == 1) {
            a.swap(row, pr);
            for r in 0..m {
                if r != row && a[r][col] == 1 {
                    for c in 0..=m {
                        a[r][c] ^= a[row][c];
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
        }
    }
    // consistency
    for r in row..m {
        if a[r][m] == 1 {
            return None;
        }
    }
    let mut y = vec![0u64; m];
    for (r, &col) in pivot_cols.iter().enumerate() {
        y[col] = a[r][m];
    }
    Some(ctx.from_coeffs(&y).unwrap())
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FFElem({self})")
    }
}

/// Elements print as ascending coefficient lists over F_p.
impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for FFElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter())
    }
}
