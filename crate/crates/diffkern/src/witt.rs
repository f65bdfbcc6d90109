//! Truncated Witt vectors W_n(F_{p^m}) as Galois rings (Z/p^n)[x]/(f), the
//! canonical Frobenius lift, and difference kernels in the unit group with
//! their split along the unit filtration 1 -> 1-units -> units -> residue
//! units -> 1.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::ff::{field_create, FFElem, FieldCtx};

/// Kernels are found by exhaustive unit enumeration.
pub const RING_SIZE_CAP: u64 = 1 << 24;

#[derive(Debug)]
struct GRInner {
    p: u64,
    n: u32,
    m: u32,
    /// p^n, the coefficient modulus.
    q: u64,
    /// Monic degree-m modulus over Z/p^n; reduces mod p to the field modulus.
    modulus: Vec<u64>,
    field: FieldCtx,
    /// Image of the residue class x under the Frobenius lift (the unique
    /// root of the modulus congruent to x^p mod p).
    frob_image: Vec<u64>,
}

/// The Galois ring GR(p^n, m) = W_n(F_{p^m}); cheap to clone.
#[derive(Clone, Debug)]
pub struct GaloisRing(Arc<GRInner>);

#[derive(Clone, PartialEq, Eq)]
pub struct GRElem {
    coeffs: Vec<u64>, // exactly m entries, each < p^n
    ring: GaloisRing,
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        (self.0.p, self.0.n, self.0.m) == (other.0.p, other.0.n, other.0.m)
    }
}
impl Eq for GaloisRing {}

fn poly_mulmod(a: &[u64], b: &[u64], modulus: &[u64], q: u64) -> Vec<u64> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u128; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u128 * bj as u128) % q as u128;
        }
    }
    // reduce by the monic modulus from the top
    for d in (m..prod.len()).rev() {
        let c = prod[d] % q as u128;
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (k, &mk) in modulus.iter().enumerate().take(m) {
            let idx = d - m + k;
            let sub = c * mk as u128 % q as u128;
            prod[idx] = (prod[idx] + q as u128 - sub) % q as u128;
        }
    }
    let mut out: Vec<u64> = prod[..m].iter().map(|&c| c as u64).collect();
    out.resize(m, 0);
    out
}

impl GaloisRing {
    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn n(&self) -> u32 {
        self.0.n
    }
    pub fn m(&self) -> u32 {
        self.0.m
    }
    pub fn size(&self) -> u64 {
        self.0.q.pow(self.0.m)
    }
    pub fn unit_group_order(&self) -> u64 {
        let pm = self.0.p.pow(self.0.m);
        (self.size() / pm) * (pm - 1)
    }
    pub fn residue_field(&self) -> &FieldCtx {
        &self.0.field
    }

    pub fn zero(&self) -> GRElem {
        GRElem { coeffs: vec![0; self.0.m as usize], ring: self.clone() }
    }
    pub fn one(&self) -> GRElem {
        self.from_int(1)
    }
    pub fn from_int(&self, v: i64) -> GRElem {
        let mut c = vec![0; self.0.m as usize];
        c[0] = v.rem_euclid(self.0.q as i64) as u64;
        GRElem { coeffs: c, ring: self.clone() }
    }
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<GRElem> {
        if coeffs.len() > self.0.m as usize {
            return Err(Error::Precondition("too many coefficients".into()));
        }
        let mut c: Vec<u64> = coeffs.iter().map(|&v| v % self.0.q).collect();
        c.resize(self.0.m as usize, 0);
        Ok(GRElem { coeffs: c, ring: self.clone() })
    }
    /// The residue class of x (a root of the modulus).
    pub fn gen_class(&self) -> GRElem {
        let mut c = vec![0; self.0.m as usize];
        if self.0.m > 1 {
            c[1] = 1;
        } else {
            // degree-1 modulus x: the class of x is -c_0 = 0
            c[0] = (self.0.q - self.0.modulus[0] % self.0.q) % self.0.q;
        }
        GRElem { coeffs: c, ring: self.clone() }
    }
    /// All ring elements in coefficient-counter order. Cap-guarded by create.
    pub fn iter_elems(&self) -> impl Iterator<Item = GRElem> + '_ {
        let q = self.0.q;
        let m = self.0.m as usize;
        (0..self.size()).map(move |mut v| {
            let mut c = vec![0u64; m];
            for ci in c.iter_mut() {
                *ci = v % q;
                v /= q;
            }
            GRElem { coeffs: c, ring: self.clone() }
        })
    }
}

impl GRElem {
    pub fn ring(&self) -> &GaloisRing {
        &self.ring
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

    pub fn add(&self, other: &Self) -> Self {
        let q = self.ring.0.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % q)
            .collect();
        GRElem { coeffs, ring: self.ring.clone() }
    }
    pub fn sub(&self, other: &Self) -> Self {
        let q = self.ring.0.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + q - b) % q)
            .collect();
        GRElem { coeffs, ring: self.ring.clone() }
    }
    pub fn mul(&self, other: &Self) -> Self {
        let r = &self.ring.0;
        GRElem {
            coeffs: poly_mulmod(&self.coeffs, &other.coeffs, &r.modulus, r.q),
            ring: self.ring.clone(),
        }
    }
    pub fn pow(&self, e: u64) -> Self {
        let mut acc = self.ring.one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }
    /// Reduction mod p into the residue field.
    pub fn reduce(&self) -> FFElem {
        let p = self.ring.0.p;
        let c: Vec<u64> = self.coeffs.iter().map(|&v| v % p).collect();
        self.ring.0.field.from_coeffs(&c).unwrap()
    }
    pub fn is_unit(&self) -> bool {
        !self.reduce().is_zero()
    }
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self}"), self.ring.0.q));
        }
        Ok(self.pow(self.ring.unit_group_order() - 1))
    }
    /// The Teichmueller representative of this unit's residue: the limit of
    /// x^(p^(m k)), stabilizing once m k >= n - 1.
    pub fn teichmuller(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self}"), self.ring.0.q));
        }
        let r = &self.ring.0;
        let mut cur = self.clone();
        let steps = (r.n - 1).div_ceil(r.m) + 1;
        for _ in 0..steps {
            cur = cur.pow(r.p.pow(r.m));
        }
        Ok(cur)
    }
}

/// Evaluate a polynomial with Z/p^n coefficients at a ring element.
fn eval_at(coeffs: &[u64], x: &GRElem) -> GRElem {
    let ring = x.ring();
    let mut acc = ring.zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&ring.from_int(c as i64));
    }
    acc
}

/// Build GR(p^n, m): the modulus is the finite-field modulus read mod p^n,
/// and the Frobenius-lift generator image is Hensel-refined by Newton from
/// x^p (the modulus is separable mod p, so the refinement is unique).
pub fn galois_ring_create(p: u64, n: u32, m: u32) -> Result<GaloisRing> {
    if n == 0 {
        return Err(Error::Precondition("truncation length must be >= 1".into()));
    }
    let field = field_create(p, m)?;
    let nm = (n as u64) * (m as u64);
    if nm >= 64 || p.checked_pow(nm as u32).is_none_or(|s| s > RING_SIZE_CAP) {
        return Err(Error::RingSizeCap(p, n * m));
    }
    let q = p.pow(n);
    let mut modulus: Vec<u64> = field.modulus().coeffs.clone();
    modulus.resize(m as usize + 1, 0);
    let deriv: Vec<u64> = (1..modulus.len())
        .map(|i| modulus[i] * (i as u64) % q)
        .collect();

    let inner = GRInner {
        p,
        n,
        m,
        q,
        modulus,
        field,
        frob_image: vec![0; m as usize],
    };
    let ring = GaloisRing(Arc::new(inner));

    // Newton: r <- r - f(r)/f'(r), starting from x^p
    let mut r = ring.gen_class().pow(p);
    for _ in 0..64 {
        let fr = eval_at(&ring.0.modulus, &r);
        if fr.is_zero() {
            break;
        }
        let dr = eval_at(&deriv, &r).inv()?;
        r = r.sub(&fr.mul(&dr));
    }
    assert!(eval_at(&ring.0.modulus, &r).is_zero(), "Hensel refinement must converge");
    let frob_image = r.coeffs;

    let inner = GRInner {
        frob_image,
        modulus: ring.0.modulus.clone(),
        field: ring.0.field.clone(),
        p,
        n,
        m,
        q,
    };
    Ok(GaloisRing(Arc::new(inner)))
}

/// The canonical Frobenius lift: the unique ring endomorphism reducing to
/// x -> x^p mod p and fixing Z/p^n.
pub fn gr_frobenius(x: &GRElem) -> GRElem {
    let ring = x.ring().clone();
    let img = GRElem { coeffs: ring.0.frob_image.clone(), ring: ring.clone() };
    let mut acc = ring.zero();
    for &c in x.coeffs.iter().rev() {
        acc = acc.mul(&img).add(&ring.from_int(c as i64));
    }
    acc
}

fn gr_frobenius_iter(x: &GRElem, t: u32) -> GRElem {
    let mut cur = x.clone();
    for _ in 0..t {
        cur = gr_frobenius(&cur);
    }
    cur
}

#[derive(Clone, Debug, Serialize)]
pub struct WittKernelReport {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub poly: IntPolynomial,
    pub sigma_exponent: u32,
    /// P mod p has exactly one nonzero coefficient (Theorem-4 hypothesis).
    pub monomial_mod_p: bool,
    pub gamma: Vec<GRElem>,
    pub gamma_size: usize,
}

/// Gamma = ker P(sigma) in the unit group of R, sigma = (Frobenius lift)^t:
/// x in Gamma iff prod_i sigma^(t i)(x)^(c_i) = 1, by exhaustive unit scan.
pub fn witt_kernel(ring: &GaloisRing, poly: &IntPolynomial, t: u32) -> Result<WittKernelReport> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = ring.p();
    let order = BigInt::from(ring.unit_group_order());
    // exponent of c_i on sigma^(t i)(x), reduced into the unit group
    let exps: Vec<u64> = poly
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&order).to_u64().unwrap())
        .collect();
    let monomial_mod_p = poly
        .coeffs()
        .iter()
        .filter(|c| !(*c % BigInt::from(p)).is_zero())
        .count()
        == 1;

    let mut gamma = Vec::new();
    for x in ring.iter_elems() {
        if !x.is_unit() {
            continue;
        }
        let mut acc = ring.one();
        let mut fx = x.clone();
        for (i, &e) in exps.iter().enumerate() {
            if i > 0 {
                fx = gr_frobenius_iter(&fx, t);
            }
            if e != 0 {
                acc = acc.mul(&fx.pow(e));
            }
        }
        if acc.is_one() {
            gamma.push(x);
        }
    }
    Ok(WittKernelReport {
        p,
        n: ring.n(),
        m: ring.m(),
        poly: poly.clone(),
        sigma_exponent: t,
        monomial_mod_p,
        gamma_size: gamma.len(),
        gamma,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WittSplitReport {
    pub base: WittKernelReport,
    /// Gamma-hat = Gamma intersected with the 1-units (the formal group).
    pub gamma_hat: Vec<GRElem>,
    /// Gamma-bar = image of Gamma in the residue field units.
    pub gamma_bar: Vec<FFElem>,
    pub gamma_hat_size: usize,
    pub gamma_bar_size: usize,
    /// |Gamma| = |Gamma-hat| * |Gamma-bar| (reduction kernel = Gamma-hat).
    pub product_law: bool,
    /// Theorem-4 implication: monomial mod p forces trivial Gamma-hat.
    /// None when the hypothesis does not apply.
    pub theorem4_pass: Option<bool>,
}

/// Split Gamma along 1 -> 1-units -> units -> residue units -> 1.
pub fn witt_split_analyze(report: &WittKernelReport) -> WittSplitReport {
    let gamma_hat: Vec<GRElem> = report
        .gamma
        .iter()
        .filter(|x| x.reduce().is_one())
        .cloned()
        .collect();
    let mut gamma_bar: Vec<FFElem> = Vec::new();
    for x in &report.gamma {
        let r = x.reduce();
        if !gamma_bar.contains(&r) {
            gamma_bar.push(r);
        }
    }
    let product_law = report.gamma_size == gamma_hat.len() * gamma_bar.len();
    let theorem4_pass = report.monomial_mod_p.then(|| gamma_hat.len() == 1);
    WittSplitReport {
        base: report.clone(),
        gamma_hat_size: gamma_hat.len(),
        gamma_bar_size: gamma_bar.len(),
        gamma_hat,
        gamma_bar,
        product_law,
        theorem4_pass,
    }
}

impl fmt::Debug for GRElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GRElem({self})")
    }
}

impl fmt::Display for GRElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for GRElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter())
    }
}
