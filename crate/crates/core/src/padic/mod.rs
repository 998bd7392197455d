//! Arithmetic in `Z_p` and its unramified extensions modulo `p^M`.
//!
//! A [`RingContext`] fixes the prime, the absolute precision `M` and a monic
//! modulus irreducible mod `p`; elements ([`PadicElement`]) are coefficient
//! vectors on the power basis of that modulus together with the precision to
//! which they are known. Precision follows the usual rules: sums keep the
//! smaller precision, a product `ab` is known modulo
//! `p^min(k_a + v(b), k_b + v(a))`, and dividing by an element of valuation
//! `v` costs `v` digits.

mod hensel;
mod newton;
mod phi_linear;

pub use hensel::hensel_lift_root;
pub use newton::{
    is_eisenstein, newton_polygon, newton_polygon_from_valuations, newton_polygon_rational,
    NewtonPolygon, Segment,
};
pub use phi_linear::{solve_phi_linear, solve_phi_linear_from};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::{int_valuation, is_prime_u64, CoeffRing};

/// Largest number of candidate factors the brute-force irreducibility test will try.
const IRREDUCIBILITY_SEARCH_LIMIT: u64 = 2_000_000;

/// Valuation of an element known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    /// The element is zero modulo `p^k` for its known precision `k`.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// A guaranteed lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }

    /// True when the element is certainly divisible by `p^k`.
    pub fn at_least(self, k: u32) -> bool {
        self.lower_bound() >= k
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, "\u{2265} {v}"),
        }
    }
}

/// Element of a [`RingContext`].
///
/// `coeffs` has one entry per power-basis vector, each reduced into `[0, p^prec)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicElement {
    coeffs: Vec<BigInt>,
    prec: u32,
}

impl PadicElement {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Absolute precision: the element is known modulo `p^precision`.
    pub fn precision(&self) -> u32 {
        self.prec
    }
}

struct RingInner {
    p: BigInt,
    p_u64: u64,
    precision: u32,
    /// Monic modulus, constant term first, coefficients in `[0, p^M)`.
    modulus: Vec<BigInt>,
    pows: Vec<BigInt>,
    /// `phi(w)^i` for `i < h`, where `w` is the class of `x`.
    frob_powers: Vec<Vec<BigInt>>,
}

/// A p-adic coefficient ring: `Z_p[x]/(modulus)` computed modulo `p^M`.
///
/// Cheap to clone; contexts compare equal when prime, precision and modulus agree.
#[derive(Clone)]
pub struct RingContext(Arc<RingInner>);

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingContext")
            .field("p", &self.0.p_u64)
            .field("precision", &self.0.precision)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p_u64 == other.0.p_u64
                && self.0.precision == other.0.precision
                && self.0.modulus == other.0.modulus)
    }
}

impl RingContext {
    /// Builds `Z_p[x]/(modulus)` at absolute precision `precision`.
    ///
    /// `modulus` is given constant term first and must be monic and
    /// irreducible modulo `p`; degree one gives `Z_p` itself.
    pub fn new(p: u64, precision: u32, modulus: &[BigInt]) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime_u64(p) {
            return Err(Error::CompositeP(p.to_string()));
        }
        if precision == 0 {
            return Err(Error::InvalidRing("precision must be at least 1".into()));
        }
        let mut modulus: Vec<BigInt> = modulus.to_vec();
        while modulus.len() > 1 && modulus.last().is_some_and(|c| c.is_zero()) {
            modulus.pop();
        }
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(Error::InvalidRing("modulus must be monic of degree >= 1".into()));
        }
        if !irreducible_mod_p(&modulus, p)? {
            return Err(Error::ReducibleModulus(format!("{modulus:?} mod {p}")));
        }
        let pb = BigInt::from(p);
        let mut pows = Vec::with_capacity(precision as usize + 1);
        let mut acc = BigInt::one();
        for _ in 0..=precision {
            pows.push(acc.clone());
            acc *= &pb;
        }
        let top = &pows[precision as usize];
        let modulus: Vec<BigInt> = modulus.iter().map(|c| c.mod_floor(top)).collect();
        let h = modulus.len() - 1;
        let mut identity = vec![vec![BigInt::zero(); h]; h];
        for (i, row) in identity.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        let provisional = RingContext(Arc::new(RingInner {
            p: pb,
            p_u64: p,
            precision,
            modulus,
            pows,
            frob_powers: identity,
        }));
        if h == 1 {
            return Ok(provisional);
        }
        let root = provisional.frobenius_of_generator()?;
        let mut frob_powers = Vec::with_capacity(h);
        let mut acc = provisional.one();
        for _ in 0..h {
            frob_powers.push(acc.coeffs.clone());
            acc = provisional.mul(&acc, &root);
        }
        let inner = Arc::try_unwrap(provisional.0).ok().expect("fresh context is uniquely owned");
        Ok(RingContext(Arc::new(RingInner { frob_powers, ..inner })))
    }

    /// `Z_p` at precision `precision`.
    pub fn base(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, precision, &[BigInt::zero(), BigInt::one()])
    }

    /// Same modulus at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.0.p_u64, precision, &self.0.modulus)
    }

    /// `Z_p` at the same precision.
    pub fn base_ring(&self) -> Self {
        Self::base(self.0.p_u64, self.0.precision).expect("base ring of a valid context")
    }

    pub fn p(&self) -> u64 {
        self.0.p_u64
    }

    pub fn p_big(&self) -> &BigInt {
        &self.0.p
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    /// Degree `h` of the modulus.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.0.modulus
    }

    /// `q = p^h`, the cardinality of the residue field.
    pub fn residue_cardinality(&self) -> BigInt {
        num_traits::pow(self.0.p.clone(), self.degree())
    }

    /// `p^k` for `k <= M`.
    pub fn p_pow(&self, k: u32) -> &BigInt {
        &self.0.pows[k as usize]
    }

    fn canonical(&self, mut coeffs: Vec<BigInt>, prec: u32) -> PadicElement {
        let prec = prec.min(self.0.precision);
        let m = self.p_pow(prec);
        for c in coeffs.iter_mut() {
            *c = c.mod_floor(m);
        }
        PadicElement { coeffs, prec }
    }

    /// Element with the given power-basis coefficients, known to full precision.
    pub fn from_coeffs(&self, coeffs: &[BigInt]) -> Result<PadicElement> {
        let h = self.degree();
        if coeffs.len() > h {
            return Err(Error::Schema(format!(
                "element has {} basis coefficients, ring degree is {h}",
                coeffs.len()
            )));
        }
        let mut v = coeffs.to_vec();
        v.resize(h, BigInt::zero());
        Ok(self.canonical(v, self.0.precision))
    }

    /// Image of a p-integral rational number.
    pub fn from_rational(&self, x: &BigRational) -> Result<PadicElement> {
        if x.denom().is_multiple_of(&self.0.p) {
            return Err(Error::NotDivisible(format!("{x} is not p-integral")));
        }
        let num = self.from_int(x.numer());
        let den = self.from_int(x.denom());
        Ok(self.mul(&num, &self.inverse(&den)?))
    }

    /// The class `w` of `x` in the power basis (for `h = 1` this is the constant 0).
    pub fn generator(&self) -> PadicElement {
        let h = self.degree();
        if h == 1 {
            return self.canonical(vec![-self.0.modulus[0].clone()], self.0.precision);
        }
        let mut v = vec![BigInt::zero(); h];
        v[1] = BigInt::one();
        self.canonical(v, self.0.precision)
    }

    /// `element` with its precision lowered to `min(current, k)`.
    pub fn truncate(&self, x: &PadicElement, k: u32) -> PadicElement {
        if k >= x.prec {
            return x.clone();
        }
        self.canonical(x.coeffs.clone(), k)
    }

    /// Zero known modulo `p^k`.
    pub fn zero_with_precision(&self, k: u32) -> PadicElement {
        self.canonical(vec![BigInt::zero(); self.degree()], k)
    }

    pub fn valuation(&self, x: &PadicElement) -> Valuation {
        let p = &self.0.p;
        x.coeffs
            .iter()
            .filter_map(|c| int_valuation(c, p))
            .min()
            .map(|v| Valuation::Finite(v as u32))
            .unwrap_or(Valuation::AtLeast(x.prec))
    }

    /// True when `a - b` is certainly divisible by `p^k`.
    pub fn congruent(&self, a: &PadicElement, b: &PadicElement, k: u32) -> bool {
        self.valuation(&self.sub(a, b)).at_least(k)
    }

    /// Whether `x` lies in `Z_p` (all non-constant basis coefficients vanish).
    pub fn is_in_base(&self, x: &PadicElement) -> bool {
        x.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    /// The constant basis coefficient as an integer in `[0, p^k)`.
    pub fn base_value(&self, x: &PadicElement) -> Option<BigInt> {
        self.is_in_base(x).then(|| x.coeffs[0].clone())
    }

    /// Symmetric representative of a base-ring element, in `(-p^k/2, p^k/2]`.
    pub fn signed_base_value(&self, x: &PadicElement) -> Option<BigInt> {
        let v = self.base_value(x)?;
        let m = self.p_pow(x.prec);
        Some(if &v * 2 > *m { v - m } else { v })
    }

    /// Multiplies by `p^k`.
    pub fn mul_p_pow(&self, x: &PadicElement, k: u32) -> PadicElement {
        let f = self.p_pow(k.min(self.0.precision)).clone();
        let coeffs = x.coeffs.iter().map(|c| c * &f).collect();
        self.canonical(coeffs, x.prec.saturating_add(k))
    }

    /// Exact division by `p^k`; fails if `x` is not divisible.
    pub fn div_p_pow(&self, x: &PadicElement, k: u32) -> Result<PadicElement> {
        if !self.valuation(x).at_least(k) {
            return Err(Error::NotDivisible(format!("element not divisible by p^{k}")));
        }
        let f = self.p_pow(k);
        let coeffs = x.coeffs.iter().map(|c| c / f).collect();
        Ok(self.canonical(coeffs, x.prec - k))
    }

    /// The Frobenius lift: the automorphism fixing `Z_p` and congruent to `y -> y^p`.
    pub fn frobenius(&self, x: &PadicElement) -> PadicElement {
        let h = self.degree();
        if h == 1 {
            return x.clone();
        }
        let mut out = vec![BigInt::zero(); h];
        for (c, img) in x.coeffs.iter().zip(&self.0.frob_powers) {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(img) {
                *o += c * b;
            }
        }
        self.canonical(out, x.prec)
    }

    /// `phi^k(x)`.
    pub fn frobenius_pow(&self, x: &PadicElement, k: usize) -> PadicElement {
        let k = k % self.degree();
        (0..k).fold(x.clone(), |acc, _| self.frobenius(&acc))
    }

    /// Product of all Frobenius conjugates, i.e. the norm down to `Z_p`.
    pub fn norm_to_base(&self, x: &PadicElement) -> Result<PadicElement> {
        let mut acc = x.clone();
        let mut conj = x.clone();
        for _ in 1..self.degree() {
            conj = self.frobenius(&conj);
            acc = self.mul(&acc, &conj);
        }
        if !self.is_in_base(&acc) {
            return Err(Error::NotInBaseField);
        }
        Ok(acc)
    }

    fn frobenius_of_generator(&self) -> Result<PadicElement> {
        let w = self.generator();
        let start = self.pow(&w, self.0.p_u64);
        let modulus: Vec<PadicElement> = self
            .0
            .modulus
            .iter()
            .map(|c| self.from_int(c))
            .collect();
        let poly = crate::poly::Poly::new(self.clone(), modulus);
        let root = hensel_lift_root(&poly, &start)
            .map_err(|e| Error::PrecisionExhausted(format!("Frobenius lift: {e}")))?;
        Ok(root)
    }

    fn mul_raw(&self, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let h = self.degree();
        if h == 1 {
            return vec![(&a[0] * &b[0]).mod_floor(m)];
        }
        let mut prod = vec![BigInt::zero(); 2 * h - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let md = &self.0.modulus;
        for k in (h..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]).mod_floor(m);
            if c.is_zero() {
                continue;
            }
            for i in 0..h {
                prod[k - h + i] -= &c * &md[i];
            }
        }
        prod.truncate(h);
        prod.into_iter().map(|c| c.mod_floor(m)).collect()
    }

    fn unit_inverse(&self, x: &PadicElement) -> Result<PadicElement> {
        if self.valuation(x) != Valuation::Finite(0) {
            return Err(Error::NotUnit(self.display(x)));
        }
        let p = &self.0.p;
        // inverse modulo p via y^(q-2) in the residue field
        let q = self.residue_cardinality();
        let mut e: BigInt = q - 2u32;
        let reduced: Vec<BigInt> = x.coeffs.iter().map(|c| c.mod_floor(p)).collect();
        let mut base = reduced;
        let mut y = {
            let mut one = vec![BigInt::zero(); self.degree()];
            one[0] = BigInt::one();
            one
        };
        while !e.is_zero() {
            if e.is_odd() {
                y = self.mul_raw(&y, &base, p);
            }
            e >>= 1;
            if !e.is_zero() {
                base = self.mul_raw(&base, &base, p);
            }
        }
        // Newton: y <- y (2 - x y), doubling the precision each step
        let target = x.prec;
        let mut k = 1u32;
        while k < target {
            k = (2 * k).min(target);
            let m = self.p_pow(k);
            let xy = self.mul_raw(&x.coeffs, &y, m);
            let mut two_minus: Vec<BigInt> = xy.into_iter().map(|c| -c).collect();
            two_minus[0] += 2;
            y = self.mul_raw(&y, &two_minus, m);
        }
        Ok(self.canonical(y, target))
    }
}

impl CoeffRing for RingContext {
    type Elem = PadicElement;

    fn zero(&self) -> PadicElement {
        self.zero_with_precision(self.0.precision)
    }

    fn one(&self) -> PadicElement {
        self.from_int(&BigInt::one())
    }

    fn from_int(&self, n: &BigInt) -> PadicElement {
        let mut v = vec![BigInt::zero(); self.degree()];
        v[0] = n.clone();
        self.canonical(v, self.0.precision)
    }

    fn add(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        self.canonical(coeffs, a.prec.min(b.prec))
    }

    fn sub(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        self.canonical(coeffs, a.prec.min(b.prec))
    }

    fn neg(&self, a: &PadicElement) -> PadicElement {
        let coeffs = a.coeffs.iter().map(|x| -x).collect();
        self.canonical(coeffs, a.prec)
    }

    fn mul(&self, a: &PadicElement, b: &PadicElement) -> PadicElement {
        let va = self.valuation(a).lower_bound();
        let vb = self.valuation(b).lower_bound();
        let prec = (a.prec.saturating_add(vb))
            .min(b.prec.saturating_add(va))
            .min(self.0.precision);
        let coeffs = self.mul_raw(&a.coeffs, &b.coeffs, self.p_pow(self.0.precision));
        self.canonical(coeffs, prec)
    }

    fn is_zero(&self, a: &PadicElement) -> bool {
        a.coeffs.iter().all(|c| c.is_zero())
    }

    fn is_exact_zero(&self, a: &PadicElement) -> bool {
        a.prec == self.0.precision && self.is_zero(a)
    }

    fn inverse(&self, a: &PadicElement) -> Result<PadicElement> {
        self.unit_inverse(a)
    }

    fn div(&self, a: &PadicElement, b: &PadicElement) -> Result<PadicElement> {
        let vb = self.valuation(b).finite().ok_or(Error::ZeroElement)?;
        let va = self.valuation(a);
        if !va.at_least(vb) {
            return Err(Error::NotDivisible(format!(
                "val(a) = {va} < val(b) = {vb}"
            )));
        }
        let a1 = self.div_p_pow(a, vb)?;
        let b1 = self.div_p_pow(b, vb)?;
        Ok(self.mul(&a1, &self.unit_inverse(&b1)?))
    }

    fn display(&self, a: &PadicElement) -> String {
        if self.degree() == 1 {
            a.coeffs[0].to_string()
        } else {
            let parts: Vec<String> = a.coeffs.iter().map(|c| c.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }
}

/// Brute-force irreducibility test mod `p`: no monic factor of degree `<= h/2`.
fn irreducible_mod_p(modulus: &[BigInt], p: u64) -> Result<bool> {
    let h = modulus.len() - 1;
    let pb = BigInt::from(p);
    let f: Vec<u64> = modulus
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("reduced mod p"))
        .collect();
    for k in 1..=h / 2 {
        let count = p.checked_pow(k as u32).filter(|&c| c <= IRREDUCIBILITY_SEARCH_LIMIT);
        let Some(count) = count else {
            return Err(Error::InvalidRing(format!(
                "degree {h} modulus too large for exhaustive factor search mod {p}"
            )));
        };
        for idx in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut n = idx;
            for _ in 0..k {
                g.push(n % p);
                n /= p;
            }
            g.push(1);
            if rem_mod_p(&f, &g, p).iter().all(|&c| c == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Remainder of `f` by the monic `g` over `F_p`.
fn rem_mod_p(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let base = r.len() - dg;
        for i in 0..dg {
            r[base + i] = (r[base + i] + p - (lead * g[i]) % p) % p;
        }
    }
    r
}
