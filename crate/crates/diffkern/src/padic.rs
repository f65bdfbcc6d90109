//! l-adic unit arithmetic at finite precision: logarithm and exponential on
//! 1-units, discrete logarithms modulo l^k, and the structure and membership
//! problem for the l-adic closure of the group generated by an integer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::intfact::{factor_u64, order_dividing};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 40;

/// Working context: the prime l and the precision k (modulus l^k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LAdicContext {
    pub ell: u64,
    pub k: u32,
}

impl LAdicContext {
    pub fn new(ell: u64, k: u32) -> Result<Self> {
        if !crate::arith::intfact::is_prime_u64(ell) {
            return Err(Error::NotPrime(ell));
        }
        if k == 0 || (ell == 2 && k < 3) {
            return Err(Error::Precondition(
                "precision must be >= 1, and >= 3 when l = 2".into(),
            ));
        }
        Ok(LAdicContext { ell, k })
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.ell).pow(self.k)
    }

    fn modulus_pow(&self, j: u32) -> BigUint {
        BigUint::from(self.ell).pow(j)
    }

    pub fn reduce(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus());
        x.mod_floor(&m).to_biguint().unwrap()
    }

    /// Unit residue; errors when x is divisible by l.
    pub fn unit(&self, x: &BigInt) -> Result<UnitResidue> {
        let v = self.reduce(x);
        if (&v % self.ell).is_zero() {
            return Err(Error::NotAUnit(x.to_string(), self.ell));
        }
        Ok(UnitResidue { value: v, ctx: *self })
    }
}

/// A unit modulo l^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitResidue {
    pub value: BigUint,
    pub ctx: LAdicContext,
}

/// l-adic valuation of a nonzero residue, capped at `cap`.
fn valuation(x: &BigUint, ell: u64, cap: u32) -> u32 {
    let mut v = 0;
    let mut y = x.clone();
    let l = BigUint::from(ell);
    while v < cap && (&y % &l).is_zero() {
        y /= &l;
        v += 1;
    }
    v
}

/// Truncated l-adic logarithm of a 1-unit: sum (-1)^{n+1} (u-1)^n / n,
/// correct modulo l^k. Works with guard digits so the divisions by n lose
/// nothing at the target precision.
pub fn ladic_log(u: &UnitResidue) -> Result<BigUint> {
    let ctx = u.ctx;
    let ell = ctx.ell;
    let min_v = if ell == 2 { 2 } else { 1 };
    let z0 = (&u.value + ctx.modulus() - BigUint::one()) % ctx.modulus();
    if !z0.is_zero() && valuation(&z0, ell, min_v) < min_v {
        return Err(Error::LogDomain(u.value.to_string(), ell));
    }
    // Guard digits cover the valuation of every divisor n in the series.
    let guard = ctx.k / (ell as u32 - 1).max(1) + 2;
    let kk = ctx.k + guard;
    let big_mod = ctx.modulus_pow(kk);
    let z = z0; // representative of u - 1, valid mod l^k hence the log is
                // determined mod l^k regardless of the lift
    let mut zn = z.clone();
    let mut acc = BigInt::zero();
    let mut n = 1u64;
    while !zn.is_zero() {
        // term = (-1)^{n+1} z^n / n, computed as an l-adic division.
        let a = valuation(&BigUint::from(n), ell, kk);
        let m = n / ell.pow(a) as u64;
        let reduced = &zn / ctx.modulus_pow(a);
        let inv_m = BigUint::from(m).modpow(&euler_inverse_exponent(ell, kk), &big_mod);
        let term = BigInt::from((reduced * inv_m) % &big_mod);
        if n % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
        n += 1;
        zn = (zn * &z) % &big_mod;
    }
    let m = BigInt::from(ctx.modulus());
    Ok(acc.mod_floor(&m).to_biguint().unwrap())
}

// Exponent e with x^e = x^{-1} for units mod l^kk: phi(l^kk) - 1.
fn euler_inverse_exponent(ell: u64, kk: u32) -> BigUint {
    let phi = ctx_phi(ell, kk);
    phi - BigUint::one()
}

fn ctx_phi(ell: u64, kk: u32) -> BigUint {
    BigUint::from(ell).pow(kk - 1) * BigUint::from(ell - 1)
}

/// Truncated l-adic exponential of x with v(x) >= 1 (l odd) or >= 2 (l = 2):
/// sum x^n / n!, correct modulo l^k.
pub fn ladic_exp(ctx: &LAdicContext, x: &BigUint) -> Result<UnitResidue> {
    let ell = ctx.ell;
    let min_v = if ell == 2 { 2 } else { 1 };
    let xr = x % ctx.modulus();
    if !xr.is_zero() && valuation(&xr, ell, min_v) < min_v {
        return Err(Error::ExpDomain(x.to_string(), ell));
    }
    if xr.is_zero() {
        return ctx.unit(&BigInt::one());
    }
    let vx = valuation(&xr, ell, ctx.k).max(min_v);
    // Terms with n*vx - v(n!) >= k vanish mod l^k. Find the cutoff and the
    // worst factorial valuation among contributing terms.
    let mut n_max = 1u64;
    let mut v_worst = 0u64;
    loop {
        let vn = n_max * vx as u64;
        let vfact = factorial_valuation(n_max, ell);
        if vn >= vfact + ctx.k as u64 && (n_max * (vx as u64 * (ell - 1) - 1)) >= (ell - 1) * ctx.k as u64 {
            break;
        }
        v_worst = v_worst.max(vfact);
        n_max += 1;
        if n_max > 100_000 {
            return Err(Error::Precondition("exponential series did not stabilize".into()));
        }
    }
    let kk = ctx.k + v_worst as u32 + 1;
    let big_mod = ctx.modulus_pow(kk);
    let mut acc = BigUint::one();
    let mut xn = xr.clone() % &big_mod;
    for n in 1..=n_max {
        let a = factorial_valuation(n, ell) as u32;
        let m_unit = factorial_unit_part(n, ell, &big_mod);
        let reduced = &xn / ctx.modulus_pow(a);
        let inv = m_unit.modpow(&euler_inverse_exponent(ell, kk), &big_mod);
        acc = (acc + reduced * inv) % &big_mod;
        xn = (xn * &xr) % &big_mod;
    }
    let value = acc % ctx.modulus();
    Ok(UnitResidue { value, ctx: *ctx })
}

/// v_l(n!) by Legendre's formula.
fn factorial_valuation(n: u64, ell: u64) -> u64 {
    let mut v = 0;
    let mut p = ell;
    while p <= n {
        v += n / p;
        match p.checked_mul(ell) {
            Some(np) => p = np,
            None => break,
        }
    }
    v
}

/// The unit part n! / l^{v(n!)} modulo `m`.
fn factorial_unit_part(n: u64, ell: u64, m: &BigUint) -> BigUint {
    let mut acc = BigUint::one();
    for i in 1..=n {
        let mut j = i;
        while j % ell == 0 {
            j /= ell;
        }
        acc = (acc * BigUint::from(j)) % m;
    }
    acc
}

/// Result of a unit discrete logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DlogResult {
    /// Smallest nonnegative t with base^t = target, and the modulus the
    /// exponent is determined by.
    Found { t: BigUint, modulus: BigUint },
    NotInSubgroup,
}

/// Smallest nonnegative t with base^t = target mod l^k, by Pohlig-Hellman on
/// the prime-to-l part plus l-adic-log division on the 1-unit part.
pub fn unit_dlog(base: &UnitResidue, target: &UnitResidue) -> Result<DlogResult> {
    let ctx = base.ctx;
    if target.ctx != ctx {
        return Err(Error::Precondition("contexts differ".into()));
    }
    if ctx.ell == 2 {
        return unit_dlog_two(base, target);
    }
    let ell = ctx.ell;
    let md = ctx.modulus();
    let tors_exp = ctx.modulus_pow(ctx.k - 1); // projection onto the (l-1)-torsion
    let a_base = base.value.modpow(&tors_exp, &md);
    let a_target = target.value.modpow(&tors_exp, &md);

    // Order of the torsion component of the base: the order of base mod l.
    let b_mod_l = (&base.value % ell).to_u64().unwrap();
    let eb = order_dividing(b_mod_l, ell, ell - 1);
    let t_a = match pohlig_hellman(&a_base, &a_target, eb, &md) {
        Some(t) => t,
        None => return Ok(DlogResult::NotInSubgroup),
    };

    // 1-unit components.
    let one_exp = BigUint::from(ell - 1);
    let b_base = UnitResidue { value: base.value.modpow(&one_exp, &md), ctx };
    let b_target = UnitResidue { value: target.value.modpow(&one_exp, &md), ctx };
    let x = ladic_log(&b_base)?;
    let y = ladic_log(&b_target)?;
    let (t_b, m_b) = match solve_linear_padic(&x, &y, ell, ctx.k) {
        Some(r) => r,
        None => return Ok(DlogResult::NotInSubgroup),
    };

    // Combine by CRT: moduli eb and l^{m_b} are coprime.
    let lmb = ctx.modulus_pow(m_b);
    let modulus = BigUint::from(eb) * &lmb;
    let t = crt_pair(&BigUint::from(t_a), &BigUint::from(eb), &t_b, &lmb);
    // Safety check.
    if base.value.modpow(&t, &md) != target.value {
        return Ok(DlogResult::NotInSubgroup);
    }
    Ok(DlogResult::Found { t, modulus })
}

fn unit_dlog_two(base: &UnitResidue, target: &UnitResidue) -> Result<DlogResult> {
    let ctx = base.ctx;
    let md = ctx.modulus();
    let sign = |u: &BigUint| -> bool { (u % 4u32).to_u64().unwrap() == 3 };
    let oneunit = |u: &BigUint| -> BigUint {
        if sign(u) {
            (&md - u) % &md
        } else {
            u.clone()
        }
    };
    let eps_b = sign(&base.value);
    let eps_t = sign(&target.value);
    let w_b = UnitResidue { value: oneunit(&base.value), ctx };
    let w_t = UnitResidue { value: oneunit(&target.value), ctx };
    let x = ladic_log(&w_b)?;
    let y = ladic_log(&w_t)?;
    let (t_b, m_b) = match solve_linear_padic(&x, &y, 2, ctx.k) {
        Some(r) => r,
        None => return Ok(DlogResult::NotInSubgroup),
    };
    // Parity constraint from the sign component.
    let (t, modulus) = if eps_b {
        // t must be congruent to eps_t mod 2.
        let want = if eps_t { BigUint::one() } else { BigUint::zero() };
        if m_b >= 1 {
            if (&t_b % 2u32) != want {
                return Ok(DlogResult::NotInSubgroup);
            }
            (t_b, ctx.modulus_pow(m_b))
        } else {
            (want, BigUint::from(2u32))
        }
    } else {
        if eps_t {
            return Ok(DlogResult::NotInSubgroup);
        }
        (t_b, ctx.modulus_pow(m_b))
    };
    if base.value.modpow(&t, &md) != target.value {
        return Ok(DlogResult::NotInSubgroup);
    }
    Ok(DlogResult::Found { t, modulus })
}

/// Solve t * x = y mod l^k for t, where x, y are l-adic logs (valuation >= 1).
/// Returns (t mod l^m, m) with m = k - v(x), or None when no solution exists.
fn solve_linear_padic(x: &BigUint, y: &BigUint, ell: u64, k: u32) -> Option<(BigUint, u32)> {
    if x.is_zero() {
        return if y.is_zero() {
            Some((BigUint::zero(), 0))
        } else {
            None
        };
    }
    let vx = valuation(x, ell, k);
    let vy = if y.is_zero() { k } else { valuation(y, ell, k) };
    if vy < vx {
        return None;
    }
    let m = k - vx;
    if m == 0 {
        return Some((BigUint::zero(), 0));
    }
    let lm = BigUint::from(ell).pow(m);
    let xu = x / BigUint::from(ell).pow(vx);
    let yu = (y / BigUint::from(ell).pow(vx)) % &lm;
    let phi = ctx_phi(ell, m);
    let inv = (xu % &lm).modpow(&(phi - BigUint::one()), &lm);
    Some(((yu * inv) % &lm, m))
}

fn crt_pair(a: &BigUint, m: &BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    // m, n coprime; find x = a mod m, x = b mod n.
    if m.is_one() {
        return b.clone();
    }
    if n.is_one() {
        return a.clone();
    }
    let (mi, ni) = (BigInt::from(m.clone()), BigInt::from(n.clone()));
    let e = mi.extended_gcd(&ni);
    debug_assert!(e.gcd.is_one());
    // x = a + m * ((b - a) * m^{-1} mod n)
    let diff = BigInt::from(b.clone()) - BigInt::from(a.clone());
    let minv = e.x.mod_floor(&ni);
    let k = (diff * minv).mod_floor(&ni);
    let x = BigInt::from(a.clone()) + mi.clone() * k;
    x.mod_floor(&(mi * ni)).to_biguint().unwrap()
}

/// Pohlig-Hellman in the cyclic group generated by `g` of known order `ord`
/// (all elements mod `md`). Returns t with g^t = h, or None.
fn pohlig_hellman(g: &BigUint, h: &BigUint, ord: u64, md: &BigUint) -> Option<u64> {
    let mut t = 0u64;
    let mut modulus = 1u64;
    for (&r, &e) in factor_u64(ord).iter() {
        let re = r.pow(e);
        let gi = g.modpow(&BigUint::from(ord / re), md);
        let hi = h.modpow(&BigUint::from(ord / re), md);
        let x = ph_prime_power(&gi, &hi, r, e, md)?;
        t = crt_pair(
            &BigUint::from(t),
            &BigUint::from(modulus),
            &BigUint::from(x),
            &BigUint::from(re),
        )
        .to_u64()
        .unwrap();
        modulus *= re;
    }
    // Verify (also covers ord = 1).
    if g.modpow(&BigUint::from(t), md) == *h {
        Some(t)
    } else {
        None
    }
}

fn ph_prime_power(g: &BigUint, h: &BigUint, r: u64, e: u32, md: &BigUint) -> Option<u64> {
    // g has order r^e; digits of t base r.
    let gamma = g.modpow(&BigUint::from(r.pow(e - 1)), md); // order r
    let mut t = 0u64;
    let g_inv = mod_inverse(g, md)?;
    for j in 0..e {
        let exp = r.pow(e - 1 - j);
        let cur = (h * g_inv.modpow(&BigUint::from(t), md)) % md;
        let target = cur.modpow(&BigUint::from(exp), md);
        let d = bsgs(&gamma, &target, r, md)?;
        t += d * r.pow(j);
    }
    Some(t)
}

fn mod_inverse(a: &BigUint, md: &BigUint) -> Option<BigUint> {
    let e = BigInt::from(a.clone()).extended_gcd(&BigInt::from(md.clone()));
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&BigInt::from(md.clone())).to_biguint().unwrap())
}

/// Baby-step giant-step in the subgroup generated by g of order `ord`.
fn bsgs(g: &BigUint, h: &BigUint, ord: u64, md: &BigUint) -> Option<u64> {
    use std::collections::HashMap;
    let s = (ord as f64).sqrt().ceil() as u64 + 1;
    let mut table: HashMap<Vec<u8>, u64> = HashMap::new();
    let mut cur = BigUint::one();
    for j in 0..s {
        table.entry(cur.to_bytes_le()).or_insert(j);
        cur = (cur * g) % md;
    }
    // giant step: g^{-s}
    let gs = mod_inverse(&g.modpow(&BigUint::from(s), md), md)?;
    let mut y = h.clone();
    for i in 0..=s {
        if let Some(&j) = table.get(&y.to_bytes_le()) {
            let t = i * s + j;
            if t < ord || ord == 0 {
                return Some(t % ord.max(1));
            }
            return Some(t);
        }
        y = (y * &gs) % md;
    }
    None
}

/// Structure of the l-adic closure of the group generated by an integer b:
/// e = order of b mod l, s = valuation of b^e - 1 (capped at the working
/// precision).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureDescriptor {
    #[serde(serialize_with = "crate::serde_util::bigint_string")]
    pub base: BigInt,
    pub ell: u64,
    /// Multiplicative order of b mod l (mod 4 when l = 2).
    pub e: u64,
    /// l-adic valuation of b^e - 1, capped at the context precision.
    pub s: u32,
    /// l = 2 only: whether the closure meets the -1 component (b = 3 mod 4).
    pub sign_component: Option<bool>,
    pub is_full: bool,
    /// Precision the descriptor was computed at.
    pub k: u32,
}

/// Structure of the closure of <b> in the l-adic units.
pub fn closure_of(b: &BigInt, ctx: &LAdicContext) -> Result<ClosureDescriptor> {
    if b.magnitude() <= &BigUint::one() {
        return Err(Error::Precondition("|b| must exceed 1".into()));
    }
    let ell = ctx.ell;
    let unit = ctx.unit(b)?; // also checks gcd(b, l) = 1
    if ell == 2 {
        let sq = b * b - BigInt::one();
        let s = valuation(&sq.magnitude().clone(), 2, 64);
        let e = if (b.mod_floor(&BigInt::from(4))).to_u64() == Some(1) { 1 } else { 2 };
        let sign = b.mod_floor(&BigInt::from(4)).to_u64() == Some(3);
        // A single topological generator never fills {+-1} x (1 + 4 Z_2),
        // so the closure is never the whole unit group at l = 2.
        return Ok(ClosureDescriptor {
            base: b.clone(),
            ell,
            e,
            s,
            sign_component: Some(sign),
            is_full: false,
            k: ctx.k,
        });
    }
    let b_mod_l = (&unit.value % ell).to_u64().unwrap();
    let e = order_dividing(b_mod_l, ell, ell - 1);
    let md = ctx.modulus();
    let be = unit.value.modpow(&BigUint::from(e), &md);
    let diff = (&be + &md - BigUint::one()) % &md;
    let s = if diff.is_zero() {
        ctx.k
    } else {
        valuation(&diff, ell, ctx.k)
    };
    Ok(ClosureDescriptor {
        base: b.clone(),
        ell,
        e,
        s,
        sign_component: None,
        is_full: e == ell - 1 && s == 1,
        k: ctx.k,
    })
}

/// Finite-level membership: is a in the closure of <b> mod l^k? When yes,
/// also returns the witness exponent t with b^t = a mod l^k.
pub fn closure_contains(
    desc: &ClosureDescriptor,
    a: &BigInt,
    level: u32,
) -> Result<(bool, Option<BigUint>)> {
    let ctx = LAdicContext::new(desc.ell, level)?;
    let base = ctx.unit(&desc.base)?;
    let target = ctx.unit(a)?;
    match unit_dlog(&base, &target)? {
        DlogResult::Found { t, .. } => Ok((true, Some(t))),
        DlogResult::NotInSubgroup => Ok((false, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(ell: u64, k: u32) -> LAdicContext {
        LAdicContext::new(ell, k).unwrap()
    }

    #[test]
    fn log_of_one_is_zero() {
        let c = ctx(5, 10);
        let u = c.unit(&BigInt::one()).unwrap();
        assert!(ladic_log(&u).unwrap().is_zero());
    }

    #[test]
    fn log_domain_error() {
        let c = ctx(5, 4);
        let u = c.unit(&BigInt::from(7)).unwrap();
        assert!(matches!(ladic_log(&u), Err(Error::LogDomain(..))));
    }

    #[test]
    fn exp_domain_error() {
        let c = ctx(3, 5);
        assert!(matches!(
            ladic_exp(&c, &BigUint::one()),
            Err(Error::ExpDomain(..))
        ));
    }

    #[test]
    fn round_trip_mod_5_4() {
        let c = ctx(5, 4);
        let u = c.unit(&BigInt::from(6)).unwrap();
        let x = ladic_log(&u).unwrap();
        let back = ladic_exp(&c, &x).unwrap();
        assert_eq!(back.value, u.value);

        let x = BigUint::from(10u32);
        let e = ladic_exp(&c, &x).unwrap();
        let back = ladic_log(&e).unwrap();
        assert_eq!(back, x % c.modulus());
    }

    #[test]
    fn dlog_examples() {
        // 2^7 = 128 = 3 mod 25
        let c = ctx(5, 2);
        let base = c.unit(&BigInt::from(2)).unwrap();
        let target = c.unit(&BigInt::from(3)).unwrap();
        match unit_dlog(&base, &target).unwrap() {
            DlogResult::Found { t, .. } => assert_eq!(t, BigUint::from(7u32)),
            _ => panic!("expected a solution"),
        }
        // 7^2 = 49 = 4 mod 9
        let c = ctx(3, 2);
        let base = c.unit(&BigInt::from(7)).unwrap();
        let target = c.unit(&BigInt::from(4)).unwrap();
        match unit_dlog(&base, &target).unwrap() {
            DlogResult::Found { t, .. } => assert_eq!(t, BigUint::from(2u32)),
            _ => panic!("expected a solution"),
        }
        // target = 1 gives t = 0
        let c = ctx(7, 3);
        let base = c.unit(&BigInt::from(3)).unwrap();
        let target = c.unit(&BigInt::one()).unwrap();
        match unit_dlog(&base, &target).unwrap() {
            DlogResult::Found { t, .. } => assert!(t.is_zero()),
            _ => panic!("expected a solution"),
        }
    }

    #[test]
    fn dlog_not_in_subgroup() {
        // <7> mod 9 is {1, 4, 7}; 2 is not in it.
        let c = ctx(3, 2);
        let base = c.unit(&BigInt::from(7)).unwrap();
        let target = c.unit(&BigInt::from(2)).unwrap();
        assert_eq!(unit_dlog(&base, &target).unwrap(), DlogResult::NotInSubgroup);
    }

    #[test]
    fn closure_examples() {
        let c = ctx(5, 10);
        let d = closure_of(&BigInt::from(2), &c).unwrap();
        assert_eq!((d.e, d.s, d.is_full), (4, 1, true));

        let c = ctx(3, 10);
        let d = closure_of(&BigInt::from(7), &c).unwrap();
        assert_eq!((d.e, d.s, d.is_full), (1, 1, false));

        let d = closure_of(&BigInt::from(-7), &c).unwrap();
        assert_eq!((d.e, d.s, d.is_full), (2, 1, true));
    }

    #[test]
    fn closure_membership() {
        let c = ctx(5, 10);
        let d = closure_of(&BigInt::from(2), &c).unwrap();
        let (ok, t) = closure_contains(&d, &BigInt::from(3), 2).unwrap();
        assert!(ok);
        assert_eq!(t, Some(BigUint::from(7u32)));

        let c3 = ctx(3, 10);
        let d3 = closure_of(&BigInt::from(7), &c3).unwrap();
        let (ok, _) = closure_contains(&d3, &BigInt::from(2), 2).unwrap();
        assert!(!ok);

        // a = b is always a member with t = 1.
        let (ok, t) = closure_contains(&d, &BigInt::from(2), 5).unwrap();
        assert!(ok);
        assert_eq!(t, Some(BigUint::one()));
    }

    #[test]
    fn dlog_at_two() {
        // 3^t mod 32: 3^1=3, 3^2=9, 3^3=27, 3^4=81=17, 3^5=51=19 ...
        let c = ctx(2, 5);
        let base = c.unit(&BigInt::from(3)).unwrap();
        let target = c.unit(&BigInt::from(17)).unwrap();
        match unit_dlog(&base, &target).unwrap() {
            DlogResult::Found { t, .. } => assert_eq!(t, BigUint::from(4u32)),
            _ => panic!("expected a solution"),
        }
        // 5 is not a power of 3 mod 32 (powers of 3 are 1,3,9,27,17,19,25,11).
        let target = c.unit(&BigInt::from(5)).unwrap();
        assert_eq!(unit_dlog(&base, &target).unwrap(), DlogResult::NotInSubgroup);
    }
}
