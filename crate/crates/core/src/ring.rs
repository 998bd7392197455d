//! Coefficient domains shared by polynomials and truncated series.
//!
//! A [`CoeffRing`] is a small handle object that performs arithmetic on its
//! element type. Two implementations exist: [`Rationals`] for exact
//! identities and [`RingContext`](crate::padic::RingContext) for p-adic
//! arithmetic modulo `p^M`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub trait CoeffRing: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// True when `a` is zero, or indistinguishable from zero at its known precision.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// True when `a` is zero to full working precision, so products with it are zero too.
    fn is_exact_zero(&self, a: &Self::Elem) -> bool {
        self.is_zero(a)
    }
    /// Inverse of a unit of the ring.
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Exact quotient `a / b`, failing when it does not exist in the ring.
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn display(&self, a: &Self::Elem) -> String;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_int(&BigInt::from(n))
    }

    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The field of rational numbers, used for exact integer/rational identities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inverse(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::NotUnit("0".into()))
        } else {
            Ok(a.recip())
        }
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational> {
        Ok(a * self.inverse(b)?)
    }
    fn display(&self, a: &BigRational) -> String {
        format_rational(a)
    }
}

/// `"a"` for integers, `"a/b"` otherwise.
pub fn format_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim().replace('\u{2212}', "-");
    let bad = || Error::Schema(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational; `None` for zero.
pub fn rational_valuation(x: &BigRational, p: &BigInt) -> Option<i64> {
    let vn = int_valuation(x.numer(), p)? as i64;
    let vd = int_valuation(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// True when `x` lies in the localization `Z_(p)`.
pub fn is_p_integral(x: &BigRational, p: &BigInt) -> bool {
    !x.denom().is_multiple_of(p)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_round_trip() {
        assert_eq!(parse_rational("-1/12").unwrap(), q(-1, 12));
        assert_eq!(parse_rational("\u{2212}3").unwrap(), q(-3, 1));
        assert_eq!(format_rational(&q(2, 4)), "1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        let p = BigInt::from(3);
        assert_eq!(int_valuation(&BigInt::from(9), &p), Some(2));
        assert_eq!(int_valuation(&BigInt::from(-54), &p), Some(3));
        assert_eq!(int_valuation(&BigInt::zero(), &p), None);
        assert_eq!(rational_valuation(&q(1, 90), &p), Some(-2));
        assert!(is_p_integral(&q(1, 8), &p));
        assert!(!is_p_integral(&q(1, 12), &p));
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..20).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
