//! Truncated power series in one variable ([`TruncSeries`]) and several
//! variables ([`MultiTrunc`]).
//!
//! A univariate series of order `N` is known modulo `T^(N+1)`; binary
//! operations return the smaller of the two orders.

mod multi;

pub use multi::{BivariateTrunc, MultiTrunc};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::JsonRing;
use crate::padic::{PadicElement, RingContext, Valuation};
use crate::poly::Poly;
use crate::ring::{is_p_integral, CoeffRing, Rationals};

/// `c_0 + c_1 T + ... + c_N T^N + O(T^(N+1))`.
#[derive(Clone, Debug)]
pub struct TruncSeries<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: CoeffRing> PartialEq for TruncSeries<R> {
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

impl<R: CoeffRing> TruncSeries<R> {
    /// Pads with zeros or drops terms so that the result has order `order`.
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>, order: usize) -> Self {
        coeffs.resize(order + 1, ring.zero());
        TruncSeries { ring, coeffs }
    }

    pub fn from_poly(f: &Poly<R>, order: usize) -> Self {
        Self::new(f.ring().clone(), f.coeffs().to_vec(), order)
    }

    pub fn from_ints(ring: R, coeffs: &[i64], order: usize) -> Self {
        let v = coeffs.iter().map(|&c| ring.from_i64(c)).collect();
        Self::new(ring, v, order)
    }

    pub fn zero(ring: R, order: usize) -> Self {
        Self::new(ring, Vec::new(), order)
    }

    pub fn one(ring: R, order: usize) -> Self {
        let c = ring.one();
        Self::new(ring, vec![c], order)
    }

    pub fn constant(ring: R, c: R::Elem, order: usize) -> Self {
        Self::new(ring, vec![c], order)
    }

    /// The series `T`.
    pub fn x(ring: R, order: usize) -> Self {
        let v = vec![ring.zero(), ring.one()];
        Self::new(ring, v, order)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Truncation order `N`: the series is known modulo `T^(N+1)`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Coefficient of `T^i`; panics if `i` exceeds the order.
    pub fn coeff(&self, i: usize) -> &R::Elem {
        &self.coeffs[i]
    }

    pub fn to_poly(&self) -> Poly<R> {
        Poly::new(self.ring.clone(), self.coeffs.clone())
    }

    /// Lowers the order to `min(order, self.order())`.
    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::ModeMismatch)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Ok(TruncSeries { ring: self.ring.clone(), coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|a| self.ring.neg(a))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|a| self.ring.mul(a, c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        TruncSeries {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let r = &self.ring;
        let n = self.order().min(other.order());
        let mut out = vec![r.zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if r.is_exact_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        Ok(TruncSeries { ring: r.clone(), coeffs: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.order());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// `self(g)`; requires `g(0) = 0`. The order is `min(N_f, N_g)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_ring(g)?;
        if !self.ring.is_zero(&g.coeffs[0]) {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::zero(self.ring.clone(), n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&g)?;
            acc.coeffs[0] = self.ring.add(&acc.coeffs[0], c);
        }
        Ok(acc)
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::InsufficientTruncation { needed: 2, have: 1 });
        }
        let r = &self.ring;
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| r.mul(c, &r.from_i64(i as i64 + 1)))
            .collect();
        Ok(TruncSeries { ring: r.clone(), coeffs })
    }

    /// Compositional inverse `g` with `f(g) = g(f) = T` to the same order.
    pub fn reversion(&self) -> Result<Self> {
        let r = &self.ring;
        if !r.is_zero(&self.coeffs[0]) {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let inv = r.inverse(&self.coeffs[1]).map_err(|_| Error::NonUnitLinearTerm)?;
        let mut g = Self::zero(r.clone(), n);
        g.coeffs[1] = inv.clone();
        for k in 2..=n {
            let fg = self.truncate(k).compose(&g.truncate(k))?;
            g.coeffs[k] = r.neg(&r.mul(&fg.coeffs[k], &inv));
        }
        Ok(g)
    }

    /// `c_0 + c_1 t + ... + c_N t^N` for a ring element `t`.
    pub fn eval_truncated(&self, t: &R::Elem) -> R::Elem {
        let r = &self.ring;
        self.coeffs
            .iter()
            .rev()
            .fold(r.zero(), |acc, c| r.add(&r.mul(&acc, t), c))
    }
}

impl<R: JsonRing> TruncSeries<R> {
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.coeffs.iter().map(|c| self.ring.elem_json(c)).collect();
        let mut v = json!({
            "mode": R::MODE,
            "trunc": self.order(),
            "coeffs": coeffs,
        });
        if let Some(ring) = self.ring.ring_json() {
            v["ring"] = ring;
        }
        v
    }

    /// Parses `{"trunc", "coeffs"}` over the given ring; `trunc` defaults to the
    /// number of coefficients minus one.
    pub fn from_json(ring: &R, v: &Value) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Schema("series needs a \"coeffs\" array".into()))?;
        if coeffs.is_empty() {
            return Err(Error::Schema("series has no coefficients".into()));
        }
        let c = coeffs
            .iter()
            .map(|x| ring.parse_elem(x))
            .collect::<Result<Vec<_>>>()?;
        let order = match v.get("trunc") {
            Some(t) => crate::json::parse_int(t)?
                .try_into()
                .map_err(|_| Error::Schema("bad \"trunc\"".into()))?,
            None => c.len() - 1,
        };
        Ok(Self::new(ring.clone(), c, order))
    }
}

impl TruncSeries<Rationals> {
    pub fn is_integral(&self) -> bool {
        self.to_poly().is_integral()
    }

    /// All coefficients lie in `Z_(p)`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coeffs.iter().all(|c| is_p_integral(c, &p))
    }

    /// Image over a p-adic ring; fails on coefficients with `p` in the denominator.
    pub fn to_padic(&self, ring: &RingContext) -> Result<TruncSeries<RingContext>> {
        let c = self
            .coeffs
            .iter()
            .map(|x| ring.from_rational(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries::new(ring.clone(), c, self.order()))
    }
}

impl TruncSeries<RingContext> {
    /// Smallest coefficient valuation.
    pub fn valuation(&self) -> Valuation {
        let r = &self.ring;
        let vals: Vec<Valuation> = self.coeffs.iter().map(|c| r.valuation(c)).collect();
        let finite = vals.iter().filter_map(|v| v.finite()).min();
        match finite {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(vals.iter().map(|v| v.lower_bound()).min().unwrap_or(0)),
        }
    }

    /// Coefficientwise congruence modulo `p^k` up to the common order.
    pub fn congruent(&self, other: &Self, k: u32) -> bool {
        self.ring == other.ring
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| self.ring.congruent(a, b, k))
    }

    /// Smallest precision among the coefficients.
    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    /// Applies the Frobenius lift to every coefficient.
    pub fn frobenius(&self) -> Self {
        self.map_coeffs(|c| self.ring.frobenius(c))
    }

    /// `f(x)` for `val(x) >= 1`; the unknown tail costs precision
    /// `(N+1) val(x)`.
    pub fn evaluate(&self, x: &PadicElement) -> Result<PadicElement> {
        let v = self.ring.valuation(x).lower_bound();
        if v == 0 {
            return Err(Error::DivergentEvaluation);
        }
        let y = self.eval_truncated(x);
        let cap = (self.order() as u32 + 1).saturating_mul(v);
        Ok(self.ring.truncate(&y, cap))
    }

    /// `f(g)` where `g(0)` may be nonzero of positive valuation `v`.
    ///
    /// The coefficient of `T^k` is known modulo `p^((N_f + 1 - k) v)` at best.
    pub fn compose_shifted(&self, g: &Self) -> Result<Self> {
        let r = &self.ring;
        let c = &g.coeffs[0];
        if r.is_zero(c) {
            return self.compose(g);
        }
        let v = r.valuation(c).lower_bound();
        if v == 0 {
            return Err(Error::NonzeroConstantTerm);
        }
        self.same_ring(g)?;
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::zero(r.clone(), n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&g)?;
            acc.coeffs[0] = r.add(&acc.coeffs[0], c);
        }
        let nf = self.order() as u32;
        for (k, c) in acc.coeffs.iter_mut().enumerate() {
            let cap = (nf + 1).saturating_sub(k as u32).saturating_mul(v);
            *c = r.truncate(c, cap);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(c: &[i64], n: usize) -> TruncSeries<Rationals> {
        TruncSeries::from_ints(Rationals, c, n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn products() {
        assert_eq!(q(&[0, 1], 4).mul(&q(&[0, 1], 4)).unwrap(), q(&[0, 0, 1], 4));
        assert_eq!(q(&[1, 1], 2).mul(&q(&[1, -1], 2)).unwrap(), q(&[1, 0, -1], 2));
        assert_eq!(q(&[1, 1], 2).mul(&q(&[1], 5)).unwrap().order(), 2);
        let z3 = RingContext::base(3, 6).unwrap();
        let a = TruncSeries::from_ints(z3.clone(), &[0, 3], 3);
        let sq = a.mul(&a).unwrap();
        assert_eq!(z3.valuation(sq.coeff(2)), Valuation::Finite(2));
        let z5 = RingContext::base(5, 6).unwrap();
        let b = TruncSeries::from_ints(z5, &[0, 3], 3);
        assert_eq!(a.mul(&b), Err(Error::ModeMismatch));
    }

    #[test]
    fn composition() {
        assert_eq!(q(&[0, 1, 1], 4).compose(&q(&[0, 2], 4)).unwrap(), q(&[0, 2, 4], 4));
        let p2 = q(&[0, 4, 1], 12);
        let p3 = q(&[0, 9, 6, 1], 12);
        assert_eq!(p2.compose(&p3).unwrap(), p3.compose(&p2).unwrap());
        let f = q(&[3, 1, 4, 1, 5], 6);
        assert_eq!(f.compose(&q(&[0, 1], 6)).unwrap(), f);
        assert_eq!(f.compose(&q(&[1, 1], 6)), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn derivatives() {
        let p3 = q(&[0, 9, 6, 1], 5);
        let d = p3.derivative().unwrap();
        assert_eq!(d, q(&[9, 12, 3], 4));
        assert_eq!(*d.coeff(0), rat(9, 1));
        assert!(q(&[7], 3).derivative().unwrap().is_zero());
        assert!(q(&[7], 0).derivative().is_err());
    }

    #[test]
    fn reversions() {
        let g = q(&[0, 2, 1], 2).reversion().unwrap();
        assert_eq!(g.coeffs(), &[rat(0, 1), rat(1, 2), rat(-1, 8)]);
        assert_eq!(q(&[0, 2, 1], 2).compose(&g).unwrap(), q(&[0, 1], 2));
        assert_eq!(q(&[0, 1], 5).reversion().unwrap(), q(&[0, 1], 5));
        assert_eq!(q(&[0, 0, 1], 5).reversion(), Err(Error::NonUnitLinearTerm));
        let z3 = RingContext::base(3, 5).unwrap();
        let f = TruncSeries::from_ints(z3, &[0, 3, 1], 4);
        assert_eq!(f.reversion(), Err(Error::NonUnitLinearTerm));
    }

    #[test]
    fn evaluation() {
        let z3 = RingContext::base(3, 8).unwrap();
        let x = z3.from_i64(-3);
        let t = TruncSeries::x(z3.clone(), 6);
        assert_eq!(z3.signed_base_value(&t.evaluate(&x).unwrap()), Some((-3).into()));
        let p3 = TruncSeries::from_ints(z3.clone(), &[0, 9, 6, 1], 3);
        let y = p3.evaluate(&x).unwrap();
        assert!(z3.is_zero(&y));
        assert_eq!(y.precision(), 4);
        assert!(z3.is_zero(&p3.to_poly().eval(&x)));
        assert_eq!(p3.evaluate(&z3.from_i64(2)), Err(Error::DivergentEvaluation));
    }

    #[test]
    fn shifted_composition_precision() {
        let z3 = RingContext::base(3, 10).unwrap();
        let f = TruncSeries::from_ints(z3.clone(), &[1, 1, 1, 1, 1], 4);
        let g = TruncSeries::from_ints(z3.clone(), &[3, 1], 4);
        let h = f.compose_shifted(&g).unwrap();
        assert_eq!(h.coeff(0).precision(), 5);
        assert_eq!(h.coeff(4).precision(), 1);
        // 1 + 3 + 9 + 27 + 81 = 121 = 1 + 3 + 9 + 27 + 81 mod 3^5
        assert_eq!(z3.base_value(h.coeff(0)), Some(121.into()));
    }

    #[test]
    fn exact_to_padic() {
        let f = TruncSeries::new(Rationals, vec![rat(0, 1), rat(1, 1), rat(-1, 12)], 2);
        assert!(!f.is_integral());
        assert!(f.is_p_integral(5));
        assert!(!f.is_p_integral(3));
        let z5 = RingContext::base(5, 4).unwrap();
        let g = f.to_padic(&z5).unwrap();
        assert!(z5.congruent(&z5.mul(g.coeff(2), &z5.from_i64(-12)), &z5.one(), 4));
        assert!(f.to_padic(&RingContext::base(3, 4).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = TruncSeries::new(Rationals, vec![rat(0, 1), rat(1, 1), rat(-1, 12)], 3);
        let v = f.to_json();
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["coeffs"], json!(["0", "1", "-1/12", "0"]));
        assert_eq!(TruncSeries::from_json(&Rationals, &v).unwrap(), f);
        let z3 = RingContext::base(3, 4).unwrap();
        let g = TruncSeries::from_ints(z3.clone(), &[1, -1], 1);
        let v = g.to_json();
        assert_eq!(v["ring"]["p"], "3");
        assert_eq!(v["coeffs"], json!(["1", "80"]));
    }
}
