//! Machine-word integer utilities: primality, Pollard rho, factorization.

use std::collections::BTreeMap;

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // This witness set is deterministic for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Factor n into a sorted map prime -> exponent. Trial division up to 10^6,
/// then Pollard rho on what remains.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n <= 1 {
        return out;
    }
    let mut d = 2u64;
    while d <= 1_000_000 && d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            *out.entry(m).or_insert(0) += 1;
        } else {
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out
}

/// Multiplicative order of a modulo m (a coprime to m), given that the order
/// divides `group_order`. Descends prime by prime.
pub fn order_dividing(a: u64, m: u64, group_order: u64) -> u64 {
    debug_assert_eq!(powmod(a, group_order, m), 1 % m);
    let mut ord = group_order;
    for (&q, &e) in factor_u64(group_order).iter() {
        for _ in 0..e {
            if powmod(a, ord / q, m) == 1 {
                ord /= q;
            } else {
                break;
            }
        }
    }
    ord
}

/// Multiplicative order of a modulo m, for gcd(a, m) = 1, via the group
/// exponent lambda(m) computed from the factorization of m.
pub fn mult_order_mod(a: u64, m: u64) -> u64 {
    assert!(m > 1 && gcd_u64(a % m, m) == 1);
    // Carmichael lambda.
    let mut lambda = 1u64;
    for (&p, &e) in factor_u64(m).iter() {
        let lp = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        lambda = lambda / gcd_u64(lambda, lp) * lp;
    }
    order_dividing(a % m, m, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (2..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![
                2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                79, 83, 89, 97
            ]
        );
    }

    #[test]
    fn factor_2_20_minus_1() {
        let f = factor_u64((1u64 << 20) - 1);
        let expected: BTreeMap<u64, u32> =
            [(3, 1), (5, 2), (11, 1), (31, 1), (41, 1)].into_iter().collect();
        assert_eq!(f, expected);
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order_mod(2, 25), 20);
        assert_eq!(mult_order_mod(2, 5), 4);
        assert_eq!(mult_order_mod(7, 9), 3);
        assert_eq!(mult_order_mod(3, 5), 4);
        assert_eq!(mult_order_mod(3, 7), 6);
    }
}
