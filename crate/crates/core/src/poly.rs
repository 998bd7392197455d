//! Dense univariate polynomials over a [`CoeffRing`].

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Rationals};

/// Polynomial with coefficients constant term first; trailing zeros are trimmed.
#[derive(Clone, Debug)]
pub struct Poly<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> PartialEq for Poly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| self.ring.eq_elem(a, b))
    }
}

impl<R: CoeffRing> Poly<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly { ring, coeffs }
    }

    pub fn zero(ring: R) -> Self {
        Poly { ring, coeffs: Vec::new() }
    }

    pub fn one(ring: R) -> Self {
        let c = ring.one();
        Poly::new(ring, vec![c])
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Poly::new(ring, vec![c])
    }

    /// The polynomial `T`.
    pub fn x(ring: R) -> Self {
        Self::monomial(ring.clone(), ring.one(), 1)
    }

    pub fn monomial(ring: R, c: R::Elem, k: usize) -> Self {
        let mut v = vec![ring.zero(); k];
        v.push(c);
        Poly::new(ring, v)
    }

    pub fn from_ints(ring: R, coeffs: &[i64]) -> Self {
        let v = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        Poly::new(ring, v)
    }

    pub fn from_bigints(ring: R, coeffs: &[BigInt]) -> Self {
        let v = coeffs.iter().map(|c| ring.from_int(c)).collect();
        Poly::new(ring, v)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Coefficient of `T^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| self.ring.eq_elem(c, &self.ring.one()))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        Poly::new(self.ring.clone(), self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|a| self.ring.mul(a, c))
    }

    /// Product truncated to terms of degree `< limit`.
    pub fn mul_trunc(&self, other: &Self, limit: usize) -> Self {
        let r = &self.ring;
        if self.is_zero() || other.is_zero() || limit == 0 {
            return Poly::zero(r.clone());
        }
        let n = (self.len() + other.len() - 1).min(limit);
        let mut out = vec![r.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        Poly::new(r.clone(), out)
    }

    /// Keeps the terms of degree `< limit`.
    pub fn truncate(&self, limit: usize) -> Self {
        Poly::new(self.ring.clone(), self.coeffs.iter().take(limit).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(self.ring.clone()), |acc, _| &acc * self)
    }

    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let r = &self.ring;
        self.coeffs
            .iter()
            .rev()
            .fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
    }

    /// `self(inner)` as a polynomial.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero(self.ring.clone());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(self.ring.clone(), c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let r = &self.ring;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| r.mul(c, &r.from_i64(i as i64)))
            .collect();
        Poly::new(r.clone(), v)
    }

    /// Division with remainder by a monic polynomial.
    pub fn div_rem_monic(&self, m: &Self) -> Result<(Self, Self)> {
        let r = &self.ring;
        let dm = m.degree().ok_or(Error::ZeroPolynomial)?;
        if !m.is_monic() {
            return Err(Error::InvalidShape("divisor must be monic".into()));
        }
        if self.len() <= dm {
            return Ok((Poly::zero(r.clone()), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![r.zero(); rem.len() - dm];
        for k in (dm..rem.len()).rev() {
            let c = rem[k].clone();
            rem[k] = r.zero();
            if r.is_zero(&c) {
                continue;
            }
            quot[k - dm] = c.clone();
            for i in 0..dm {
                rem[k - dm + i] = r.sub(&rem[k - dm + i], &r.mul(&c, &m.coeffs[i]));
            }
        }
        rem.truncate(dm);
        Ok((Poly::new(r.clone(), quot), Poly::new(r.clone(), rem)))
    }

    pub fn rem_monic(&self, m: &Self) -> Result<Self> {
        Ok(self.div_rem_monic(m)?.1)
    }

    /// Base-`m` digits: `self = sum_k digits[k] * m^k` with `deg digits[k] < deg m`.
    pub fn expand_in_base(&self, m: &Self) -> Result<Vec<Self>> {
        let mut digits = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.div_rem_monic(m)?;
            digits.push(r);
            cur = q;
        }
        Ok(digits)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Self {
        assert_eq!(self.ring, other.ring, "polynomials over different rings");
        let z = self.ring.zero();
        let n = self.len().max(other.len());
        let v = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Poly::new(self.ring.clone(), v)
    }
}

impl Poly<Rationals> {
    pub fn is_integral(&self) -> bool {
        use num_traits::One;
        self.coeffs.iter().all(|c| c.denom().is_one())
    }
}

impl<R: CoeffRing> Add for &Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Self) -> Poly<R> {
        self.zip_with(rhs, |a, b| self.ring.add(a, b))
    }
}

impl<R: CoeffRing> Sub for &Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Self) -> Poly<R> {
        self.zip_with(rhs, |a, b| self.ring.sub(a, b))
    }
}

impl<R: CoeffRing> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.map_coeffs(|a| self.ring.neg(a))
    }
}

impl<R: CoeffRing> Mul for &Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Self) -> Poly<R> {
        assert_eq!(self.ring, rhs.ring, "polynomials over different rings");
        self.mul_trunc(rhs, usize::MAX)
    }
}
