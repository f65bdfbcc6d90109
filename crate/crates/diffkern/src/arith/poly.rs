//! Integer and rational polynomials in one variable, coefficients ascending.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Integer-coefficient polynomial. The zero polynomial has an empty
/// coefficient list; otherwise the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPolynomial { coeffs: vec![BigInt::one()] }
    }

    /// c * T^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPolynomial { coeffs: v }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        IntPolynomial::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - other.coeff(i));
        }
        IntPolynomial::new(v)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPolynomial::new(v)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPolynomial::new(v)
    }

    /// gcd of all coefficients, with the sign of the leading coefficient.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if self.leading().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        IntPolynomial::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Exact division; error if it does not divide.
    pub fn div_exact(&self, div: &Self) -> Result<Self> {
        let (q, r) = self.to_rat().divmod(&div.to_rat());
        if !r.is_zero() {
            return Err(Error::Precondition("exact division failed".into()));
        }
        q.to_int()
            .ok_or_else(|| Error::Precondition("quotient not integral".into()))
    }

    /// True if div divides self exactly over the integers.
    pub fn is_divisible_by(&self, div: &Self) -> bool {
        if div.is_zero() {
            return false;
        }
        let (_, r) = self.to_rat().divmod(&div.to_rat());
        r.is_zero()
    }

    /// Coefficient reversal T^deg * f(1/T).
    pub fn reversal(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPolynomial::new(v)
    }

    /// Number of trailing zero coefficients, i.e. the multiplicity of the
    /// root 0.
    pub fn trailing_zero_count(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide out T^k.
    pub fn shift_down(&self, k: usize) -> Self {
        IntPolynomial::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Primitive gcd over Q, returned as a primitive integer polynomial with
    /// positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = self.to_rat().gcd(&other.to_rat());
        if g.is_zero() {
            return Self::zero();
        }
        g.clear_denominators().primitive_part()
    }

    /// Squarefree part f / gcd(f, f').
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.primitive_part();
        }
        self.div_exact(&g)
            .expect("gcd divides")
            .primitive_part()
    }

    /// Parse "5,3,1" as 5 + 3T + T^2. An empty string is rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs: Result<Vec<BigInt>> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {t:?}: {e}")))
            })
            .collect();
        Ok(IntPolynomial::new(coeffs?))
    }

    /// Serialize as comma-separated ascending coefficients.
    pub fn serialize(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl serde::Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.serialize())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.sign() == Sign::Minus { "-" } else { "+" };
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}")?;
                    }
                    if i == 1 {
                        write!(f, "T")?;
                    } else {
                        write!(f, "T^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rational-coefficient polynomial, exact arithmetic throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly { coeffs: vec![BigRational::one()] }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RatPoly::new(v)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn divmod(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero());
        if self.is_zero() || self.degree() < div.degree() {
            return (Self::zero(), self.clone());
        }
        let dd = div.degree().unwrap();
        let inv_lc = div.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in div.coeffs.iter().enumerate() {
                let t = &c * d;
                rem[i - dd + j] -= t;
            }
            quot[i - dd] = c;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
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
            let lc = a.leading().recip();
            a.scale(&lc)
        }
    }

    pub fn derivative(&self) -> Self {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Multiply by the lcm of denominators, giving an integer polynomial.
    pub fn clear_denominators(&self) -> IntPolynomial {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&l / c.denom()))
                .collect(),
        )
    }

    /// Integer polynomial if all coefficients are integral.
    pub fn to_int(&self) -> Option<IntPolynomial> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.is_integer() {
                return None;
            }
            v.push(c.to_integer());
        }
        Some(IntPolynomial::new(v))
    }
}
