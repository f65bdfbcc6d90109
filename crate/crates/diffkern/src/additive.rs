//! Twisted polynomial ring k{F} with Fa = a^p F, kernels of additive
//! polynomials as F_p-subspaces of explicit extension fields, and difference
//! kernels ker P(sigma) for sigma a Frobenius power, with their Fix(sigma)
//! vector-space structure.

use serde::Serialize;

use crate::arith::intfact::powmod;
use crate::arith::modpoly::ModPoly;
use crate::error::{Error, Result};
use crate::ff::{field_create, frobenius_apply, FFElem, FieldCtx};

/// M scans multiples of the coefficient field degree up to this multiplier
/// times the F-degree.
pub const KERNEL_FIELD_MULTIPLIER: u32 = 24;
/// Enumerating a subfield embedding is linear in the subfield size.
const EMBED_SIZE_CAP: u64 = 1 << 16;
const ORDER_SCAN_CAP: u64 = 1_000_000;

/// Element of k{F}: sum a_i F^i acting as x -> sum a_i x^(p^i).
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedPoly {
    ctx: FieldCtx,
    /// Ascending in F; trimmed, so the last entry is nonzero unless empty.
    coeffs: Vec<FFElem>,
}

impl TwistedPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FFElem>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TwistedPoly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        TwistedPoly { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        TwistedPoly { ctx: ctx.clone(), coeffs: vec![ctx.one()] }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// F-degree; None for the zero element.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.ctx.zero();
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&zero)
                    .add(other.coeffs.get(i).unwrap_or(&zero))
            })
            .collect();
        TwistedPoly::new(&self.ctx, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.ctx.zero();
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&zero)
                    .sub(other.coeffs.get(i).unwrap_or(&zero))
            })
            .collect();
        TwistedPoly::new(&self.ctx, coeffs)
    }

    /// The additive map x -> sum a_i x^(p^i); x may live in an extension of
    /// the coefficient field, with coefficients already embedded there.
    pub fn eval(&self, x: &FFElem) -> FFElem {
        let mut acc = x.ctx().zero();
        let mut cur = x.clone();
        for a in &self.coeffs {
            acc = acc.add(&a.mul(&cur));
            cur = frobenius_apply(&cur, 1);
        }
        acc
    }
}

/// Product under F^i b = b^(p^i) F^i; degrees add.
pub fn ore_mul(a: &TwistedPoly, b: &TwistedPoly) -> TwistedPoly {
    if a.is_zero() || b.is_zero() {
        return TwistedPoly::zero(&a.ctx);
    }
    let ctx = &a.ctx;
    let mut out = vec![ctx.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        for (j, bj) in b.coeffs.iter().enumerate() {
            let term = ai.mul(&frobenius_apply(bj, i as u32));
            out[i + j] = out[i + j].add(&term);
        }
    }
    TwistedPoly::new(ctx, out)
}

/// Right division A = Q B + R with deg_F R < deg_F B.
pub fn ore_rdivmod(a: &TwistedPoly, b: &TwistedPoly) -> Result<(TwistedPoly, TwistedPoly)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let ctx = &a.ctx;
    let db = b.deg().unwrap();
    let lb = b.coeffs.last().unwrap();
    let mut r = a.clone();
    let mut q = vec![ctx.zero(); a.coeffs.len().saturating_sub(db)];
    while let Some(dr) = r.deg() {
        if dr < db {
            break;
        }
        // (q F^(dr-db)) (lb F^db) = q lb^(p^(dr-db)) F^dr
        let shift = (dr - db) as u32;
        let qc = r.coeffs.last().unwrap().mul(&frobenius_apply(lb, shift).inv()?);
        q[dr - db] = qc.clone();
        let mut term = vec![ctx.zero(); dr - db];
        term.push(qc);
        r = r.sub(&ore_mul(&TwistedPoly::new(ctx, term), b));
    }
    Ok((TwistedPoly::new(ctx, q), r))
}

/// Kernel of an additive polynomial as an F_p-subspace of F_{p^M}.
#[derive(Clone, Debug, Serialize)]
pub struct AdditiveKernel {
    pub p: u64,
    /// Degree of the ambient field F_{p^M}.
    pub field_degree: u32,
    /// F_p-basis, as coefficient vectors in the ambient field.
    pub basis: Vec<FFElem>,
    pub dimension: u32,
    /// False when the field-degree bound was hit before the kernel reached
    /// the separable degree.
    pub complete: bool,
    #[serde(skip)]
    pub field: FieldCtx,
}

/// Images of the coefficient-field power basis inside the big field: the
/// residue class x of the small modulus is sent to a root of that modulus.
fn subfield_embedding(small: &FieldCtx, big: &FieldCtx) -> Result<Vec<FFElem>> {
    let d = small.m();
    assert_eq!(big.m() % d, 0, "degree must divide the extension degree");
    if d == 1 {
        return Ok(vec![big.one()]);
    }
    if small.size() > EMBED_SIZE_CAP {
        return Err(Error::Precondition(
            "coefficient field too large to embed by enumeration".into(),
        ));
    }
    // the subfield is the powers of g^((p^M-1)/(p^d-1)) together with 0
    let h = big.generator().pow(big.group_order() / small.group_order());
    let modulus = small.modulus();
    let mut cand = big.one();
    for _ in 0..small.group_order() {
        // Horner at cand with prime-field coefficients
        let mut v = big.zero();
        for &c in modulus.coeffs.iter().rev() {
            v = v.mul(&cand).add(&big.from_int(c as i64));
        }
        if v.is_zero() {
            let mut powers = Vec::with_capacity(d as usize);
            let mut acc = big.one();
            for _ in 0..d {
                powers.push(acc.clone());
                acc = acc.mul(&cand);
            }
            return Ok(powers);
        }
        cand = cand.mul(&h);
    }
    unreachable!("the modulus splits in every extension of its own degree");
}

fn embed_twisted(lam: &TwistedPoly, big: &FieldCtx) -> Result<TwistedPoly> {
    let powers = subfield_embedding(&lam.ctx, big)?;
    let coeffs = lam
        .coeffs
        .iter()
        .map(|a| {
            let mut acc = big.zero();
            for (c, pw) in a.coeffs().iter().zip(&powers) {
                acc = acc.add(&pw.mul(&big.from_int(*c as i64)));
            }
            acc
        })
        .collect();
    Ok(TwistedPoly::new(big, coeffs))
}

/// Nullspace basis of the M x M matrix with the given columns, over F_p.
fn nullspace_mod_p(cols: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = cols.len();
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        if let Some(pr) = (row..n).find(|&r| a[r][col] != 0) {
            a.swap(row, pr);
            let inv = powmod(a[row][col], p - 2, p);
            for c in 0..n {
                a[row][c] = a[row][c] * inv % p;
            }
            for r in 0..n {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..n {
                        a[r][c] = (a[r][c] + (p - f) * a[row][c]) % p;
                    }
                }
            }
            pivot_of_col[col] = row;
            row += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free] != usize::MAX {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for col in 0..n {
            let r = pivot_of_col[col];
            if r != usize::MAX {
                v[col] = (p - a[r][free] % p) % p;
            }
        }
        basis.push(v);
    }
    basis
}

/// Kernel of lambda in a specific field: nullspace of the F_p-linear matrix
/// of x -> lambda(x) on the power basis.
fn kernel_in_field(lam: &TwistedPoly, field: &FieldCtx) -> Result<AdditiveKernel> {
    let emb = if lam.ctx == *field { lam.clone() } else { embed_twisted(lam, field)? };
    let m = field.m() as usize;
    let mut cols = Vec::with_capacity(m);
    for i in 0..m {
        let mut c = vec![0u64; m];
        c[i] = 1;
        let img = emb.eval(&field.from_coeffs(&c)?);
        cols.push(img.coeffs().to_vec());
    }
    let basis: Vec<FFElem> = nullspace_mod_p(&cols, field.p())
        .into_iter()
        .map(|v| field.from_coeffs(&v).unwrap())
        .collect();
    Ok(AdditiveKernel {
        p: field.p(),
        field_degree: field.m(),
        dimension: basis.len() as u32,
        basis,
        complete: false,
        field: field.clone(),
    })
}

/// Kernel of Lambda^e over the algebraic closure, realized in the smallest
/// F_{p^M} (M a multiple of the coefficient degree, within the bound) whose
/// kernel reaches the p-degree of the separable part.
pub fn additive_kernel(lam: &TwistedPoly, e: u32) -> Result<AdditiveKernel> {
    if lam.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if e == 0 {
        return Err(Error::Precondition("power must be >= 1".into()));
    }
    let mut full = lam.clone();
    for _ in 1..e {
        full = ore_mul(&full, lam);
    }
    let insep = full.coeffs.iter().take_while(|c| c.is_zero()).count();
    let target = (full.deg().unwrap() - insep) as u32;
    let d = lam.ctx.m();
    if target == 0 {
        let mut k = kernel_in_field(&full, &lam.ctx)?;
        k.complete = true;
        return Ok(k);
    }
    let bound = KERNEL_FIELD_MULTIPLIER * full.deg().unwrap() as u32;
    let mut best: Option<AdditiveKernel> = None;
    let mut mult = 1;
    while mult * d <= bound.max(d) {
        let m = mult * d;
        mult += 1;
        let field = match field_create(lam.ctx.p(), m) {
            Ok(f) => f,
            Err(Error::FieldSizeCap(..)) => break,
            Err(e) => return Err(e),
        };
        let mut k = kernel_in_field(&full, &field)?;
        if k.dimension >= target {
            k.complete = true;
            return Ok(k);
        }
        if best.as_ref().map_or(true, |b| k.dimension > b.dimension) {
            best = Some(k);
        }
    }
    best.ok_or_else(|| Error::Precondition("no admissible kernel field".into()))
}

/// Is x in the F_p-span of the basis? Gaussian elimination on the augmented
/// coefficient matrix.
fn in_span(basis: &[FFElem], x: &FFElem, p: u64) -> bool {
    let m = x.coeffs().len();
    let n = basis.len();
    let mut a: Vec<Vec<u64>> = (0..m)
        .map(|r| {
            let mut row: Vec<u64> = basis.iter().map(|b| b.coeffs()[r]).collect();
            row.push(x.coeffs()[r]);
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..n {
        if let Some(pr) = (row..m).find(|&r| a[r][col] != 0) {
            a.swap(row, pr);
            let inv = powmod(a[row][col], p - 2, p);
            for c in 0..=n {
                a[row][c] = a[row][c] * inv % p;
            }
            for r in 0..m {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..=n {
                        a[r][c] = (a[r][c] + (p - f) * a[row][c]) % p;
                    }
                }
            }
            row += 1;
        }
    }
    a[row..].iter().all(|r| r[n] == 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct GaKernelReport {
    pub p: u64,
    /// sigma = f^t.
    pub sigma_exponent: u32,
    /// T-power factor stripped from P before the order computation.
    pub stripped_t_power: u32,
    /// Multiplicative order of T mod the stripped P: Gamma lies in
    /// Fix(sigma^n) = F_{p^(t n)}.
    pub order_n: u64,
    pub kernel: AdditiveKernel,
    /// Dimension of Gamma as a vector space over Fix(sigma) = F_{p^t}.
    pub fix_dim: u32,
}

/// Difference kernel Gamma = ker P(sigma) on G_a with sigma = f^t: realized
/// as the kernel of the additive polynomial sum c_i x^(p^(t i)) inside
/// F_{p^(t n)}, with the Fix(sigma)-structure verified on the basis.
pub fn ga_difference_kernel(poly: &[i64], p: u64, t: u32) -> Result<GaKernelReport> {
    if t == 0 {
        return Err(Error::Precondition("sigma exponent must be >= 1".into()));
    }
    let coeffs: Vec<u64> = poly.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    let mut pp = ModPoly::new(p, coeffs);
    if pp.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut stripped = 0u32;
    while pp.coeffs.first() == Some(&0) {
        pp.coeffs.remove(0);
        stripped += 1;
    }
    // order of T in F_p[T]/(P): the smallest n with P | T^n - 1
    let x = ModPoly::x(p);
    let mut s = x.rem(&pp);
    let mut n = 1u64;
    while !s.sub(&ModPoly::one(p)).is_zero() {
        s = s.mul(&x).rem(&pp);
        n += 1;
        if n > ORDER_SCAN_CAP {
            return Err(Error::SearchBoundExhausted(ORDER_SCAN_CAP));
        }
    }
    if pp.degree() == 0 {
        n = 1;
    }

    // P(sigma) as an additive polynomial: c_i at F-degree t*i
    let base = field_create(p, 1)?;
    let mut tc = vec![base.zero(); (t as usize) * pp.degree() + 1];
    for (i, &c) in pp.coeffs.iter().enumerate() {
        tc[t as usize * i] = base.from_int(c as i64);
    }
    let lam = TwistedPoly::new(&base, tc);

    let m = t as u64 * n;
    let m32 = u32::try_from(m).map_err(|_| Error::FieldSizeCap(p, u32::MAX))?;
    let field = field_create(p, m32)?;
    let mut kernel = kernel_in_field(&lam, &field)?;
    kernel.complete = true;

    // Fix(sigma)-structure: closed under F_{p^t} scaling and sigma-invariant
    if kernel.dimension % t != 0 {
        return Err(Error::VerificationFailed(
            "kernel dimension not divisible by the fixed-field degree".into(),
        ));
    }
    let subfield_order = p.checked_pow(t).ok_or(Error::FieldSizeCap(p, t))? - 1;
    let h = field.generator().pow(field.group_order() / subfield_order);
    for b in &kernel.basis {
        if !in_span(&kernel.basis, &h.mul(b), p) {
            return Err(Error::VerificationFailed(
                "kernel not closed under Fix(sigma) scaling".into(),
            ));
        }
        if !in_span(&kernel.basis, &frobenius_apply(b, t), p) {
            return Err(Error::VerificationFailed(
                "kernel not sigma-invariant".into(),
            ));
        }
    }
    let fix_dim = kernel.dimension / t;
    Ok(GaKernelReport {
        p,
        sigma_exponent: t,
        stripped_t_power: stripped,
        order_n: n,
        kernel,
        fix_dim,
    })
}
