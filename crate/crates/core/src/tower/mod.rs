//! The tower `K_n = K(u_n)` cut out by `P(u_{n+1}) = u_n`, Coleman's norm
//! operator `N_P`, and recovery of Coleman power series.
//!
//! An element of `O_{K_n} = O_K[u_n]` is stored as its residue polynomial
//! modulo `Q_n = P^{(n)} - u_0`, of degree `< d^n`.

mod norm;

pub use norm::{
    berkowitz_det, multiplication_matrix, norm_operator, norm_operator_poly, trace_operator,
    trace_operator_poly, truncation_cap,
};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::{poly_json, JsonRing};
use crate::padic::{is_eisenstein, PadicElement, RingContext, Valuation};
use crate::poly::Poly;
use crate::ring::CoeffRing;
use crate::series::TruncSeries;

/// `P`, `u_0` and the Eisenstein polynomials `Q_0, ..., Q_{n_max}`.
#[derive(Clone, Debug)]
pub struct TowerContext {
    ring: RingContext,
    p: Poly<RingContext>,
    d: usize,
    u0: PadicElement,
    /// `P^{(n)}` for `n <= max_level`.
    iterates: Vec<Poly<RingContext>>,
    /// `Q_n = P^{(n)} - u_0`.
    q: Vec<Poly<RingContext>>,
}

/// Element of `O_{K_n}` given by its residue polynomial in `u_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerElement {
    level: usize,
    residue: Poly<RingContext>,
}

impl TowerElement {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn residue(&self) -> &Poly<RingContext> {
        &self.residue
    }
}

impl TowerContext {
    /// Checks the shape of `P` and that every `Q_n`, `n <= max_level`, is Eisenstein.
    pub fn new(ring: RingContext, p: Poly<RingContext>, u0: PadicElement, max_level: usize) -> Result<Self> {
        let d = p.degree().ok_or(Error::ZeroPolynomial)?;
        if !p.is_monic() {
            return Err(Error::InvalidShape("P must be monic".into()));
        }
        if d % 2 == 0 {
            return Err(Error::InvalidShape(format!("degree {d} of P must be odd")));
        }
        let q = ring.residue_cardinality();
        let mut pow = BigInt::from(1);
        while pow < BigInt::from(d) {
            pow *= &q;
        }
        if pow != BigInt::from(d) || d == 1 {
            return Err(Error::InvalidShape(format!("degree {d} of P is not a power of q = {q} above 1")));
        }
        if !ring.is_zero(&p.coeff(0)) {
            return Err(Error::InvalidShape("P must have zero constant term".into()));
        }
        if (1..d).any(|i| !ring.valuation(&p.coeff(i)).at_least(1)) {
            return Err(Error::InvalidShape("lower coefficients of P must be divisible by p".into()));
        }
        if ring.valuation(&u0) != Valuation::Finite(1) {
            return Err(Error::InvalidShape("u_0 must have valuation exactly 1".into()));
        }
        let x = Poly::x(ring.clone());
        let mut iterates = vec![x];
        for _ in 0..max_level {
            let next = p.compose(iterates.last().expect("nonempty"));
            iterates.push(next);
        }
        let c = Poly::constant(ring.clone(), u0.clone());
        let q: Vec<Poly<RingContext>> = iterates.iter().map(|it| it - &c).collect();
        for (n, qn) in q.iter().enumerate() {
            if !is_eisenstein(qn)? {
                return Err(Error::InvalidShape(format!("Q_{n} is not Eisenstein")));
            }
        }
        Ok(TowerContext { ring, p, d, u0, iterates, q })
    }

    /// The Chebyshev tower over `Z_3`: `P = T^3 + 6T^2 + 9T`, `u_0 = -3`.
    pub fn chebyshev(precision: u32, max_level: usize) -> Result<Self> {
        let ring = RingContext::base(3, precision)?;
        let p = Poly::from_ints(ring.clone(), &[0, 9, 6, 1]);
        let u0 = ring.from_i64(-3);
        Self::new(ring, p, u0, max_level)
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn p(&self) -> &Poly<RingContext> {
        &self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn u0(&self) -> &PadicElement {
        &self.u0
    }

    pub fn max_level(&self) -> usize {
        self.q.len() - 1
    }

    /// `Q_n = P^{(n)}(T) - u_0`.
    pub fn q(&self, n: usize) -> Result<&Poly<RingContext>> {
        self.q.get(n).ok_or(Error::TowerTooShallow { needed: n, have: self.max_level() })
    }

    /// The element `f(u_n)`.
    pub fn element(&self, level: usize, f: &Poly<RingContext>) -> Result<TowerElement> {
        let residue = f.rem_monic(self.q(level)?)?;
        Ok(TowerElement { level, residue })
    }

    pub fn uniformizer(&self, level: usize) -> Result<TowerElement> {
        self.element(level, &Poly::x(self.ring.clone()))
    }

    pub fn from_base(&self, level: usize, c: &PadicElement) -> Result<TowerElement> {
        self.element(level, &Poly::constant(self.ring.clone(), c.clone()))
    }

    fn same_level(&self, a: &TowerElement, b: &TowerElement) -> Result<()> {
        if a.level == b.level {
            Ok(())
        } else {
            Err(Error::InvalidShape(format!("levels {} and {} differ", a.level, b.level)))
        }
    }

    pub fn add(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.same_level(a, b)?;
        Ok(TowerElement { level: a.level, residue: &a.residue + &b.residue })
    }

    pub fn sub(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.same_level(a, b)?;
        Ok(TowerElement { level: a.level, residue: &a.residue - &b.residue })
    }

    pub fn mul(&self, a: &TowerElement, b: &TowerElement) -> Result<TowerElement> {
        self.same_level(a, b)?;
        self.element(a.level, &(&a.residue * &b.residue))
    }

    /// `f(u_n)` for a truncated series: the unknown tail `u_n^(N+1) g(u_n)`
    /// costs precision `floor((N+1) / d^n)` on every coordinate.
    pub fn evaluate_series(&self, f: &TruncSeries<RingContext>, level: usize) -> Result<TowerElement> {
        let x = self.element(level, &f.to_poly())?;
        let dn = self.d.pow(level as u32);
        let cap = ((f.order() + 1) / dn) as u32;
        let residue = x.residue.map_coeffs(|c| self.ring.truncate(c, cap));
        Ok(TowerElement { level, residue })
    }

    /// Valuation normalized so that `v(u_n) = 1`; `None` when `x` reads as zero.
    pub fn valuation(&self, x: &TowerElement) -> Option<u64> {
        let dn = self.d.pow(x.level as u32) as u64;
        x.residue
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| self.ring.valuation(c).finite().map(|v| dn * v as u64 + i as u64))
            .min()
    }

    /// `x / u_n`, using `1/u_n = R(u_n)/u_0` where `P^{(n)}(T) = T R(T)`.
    pub fn div_by_uniformizer(&self, x: &TowerElement) -> Result<TowerElement> {
        match self.valuation(x) {
            None => return Err(Error::ZeroElement),
            Some(0) => return Err(Error::NotDivisible("unit is not divisible by u_n".into())),
            Some(_) => {}
        }
        let r = &self.ring;
        let coeffs = x.residue.coeffs();
        let shifted = Poly::new(r.clone(), coeffs.iter().skip(1).cloned().collect());
        let c0 = x.residue.coeff(0);
        if r.is_zero(&c0) {
            return self.element(x.level, &shifted);
        }
        let it = &self.iterates[x.level];
        let rest = Poly::new(r.clone(), it.coeffs().iter().skip(1).cloned().collect());
        let scale = r.div(&c0, &self.u0)?;
        self.element(x.level, &(&shifted + &rest.scale(&scale)))
    }

    /// `N_{K_{n+1}/K_n}(x)`, computed as `N_P(g)(u_n)` for the residue polynomial `g`.
    pub fn norm(&self, x: &TowerElement) -> Result<TowerElement> {
        if x.level == 0 {
            return Err(Error::LevelZero);
        }
        let n = norm_operator_poly(&self.p, &x.residue)?;
        self.element(x.level - 1, &n)
    }

    /// Every coordinate of `a - b` is divisible by `p^k`.
    pub fn congruent(&self, a: &TowerElement, b: &TowerElement, k: u32) -> Result<bool> {
        let diff = self.sub(a, b)?;
        Ok(diff
            .residue
            .coeffs()
            .iter()
            .all(|c| self.ring.valuation(c).at_least(k)))
    }

    /// `a = b` at the precision both are known to.
    pub fn equal(&self, a: &TowerElement, b: &TowerElement) -> Result<bool> {
        Ok(self.sub(a, b)?.residue.is_zero())
    }

    /// `{f(u_n)}` for `n = 0..=levels`.
    pub fn sequence_from_poly(&self, f: &Poly<RingContext>, levels: usize) -> Result<NormCompatibleSequence> {
        let elements = (0..=levels)
            .map(|n| self.element(n, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(NormCompatibleSequence { elements })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.ring_json(),
            "P": poly_json(&self.p),
            "u0": self.ring.elem_json(&self.u0),
            "maxLevel": self.max_level(),
        })
    }

    /// Checks `N(x_{n+1}) = x_n` at ring precision.
    pub fn check_norm_compatible(&self, seq: &NormCompatibleSequence) -> Result<()> {
        for (n, x) in seq.elements.iter().enumerate() {
            if x.level != n {
                return Err(Error::InvalidShape(format!("element {n} has level {}", x.level)));
            }
        }
        for n in 1..seq.elements.len() {
            let down = self.norm(&seq.elements[n])?;
            if !self.equal(&down, &seq.elements[n - 1])? {
                return Err(Error::NotNormCompatible(n));
            }
        }
        Ok(())
    }

    /// Splits `x_n = u_n^e x_n^*` with `x_n^*` a unit; `e` must not depend on `n`.
    pub fn factor_by_uniformizer(&self, seq: &NormCompatibleSequence) -> Result<(u64, NormCompatibleSequence)> {
        let mut e = None;
        for (n, x) in seq.elements.iter().enumerate() {
            let v = self.valuation(x).ok_or(Error::ZeroElement)?;
            match e {
                None => e = Some(v),
                Some(e0) if e0 != v => {
                    return Err(Error::InconsistentValuation { level: n, found: v, expected: e0 });
                }
                _ => {}
            }
        }
        let e = e.ok_or_else(|| Error::InvalidShape("empty sequence".into()))?;
        let elements = seq
            .elements
            .iter()
            .map(|x| (0..e).try_fold(x.clone(), |acc, _| self.div_by_uniformizer(&acc)))
            .collect::<Result<Vec<_>>>()?;
        Ok((e, NormCompatibleSequence { elements }))
    }

    /// `f_j = N_P^j(g_{2j})` for a norm-compatible sequence of units, with
    /// the congruences `f_j(u_n) = x_n mod p^(j+1)`, `n <= j`, checked.
    pub fn coleman_recover(&self, seq: &NormCompatibleSequence, j: usize) -> Result<ColemanResult> {
        let have = seq.elements.len().saturating_sub(1);
        if seq.elements.len() < 2 * j + 1 {
            return Err(Error::TowerTooShallow { needed: 2 * j, have });
        }
        if j as u32 + 1 > self.ring.precision() {
            return Err(Error::PrecisionExhausted(format!(
                "congruences mod p^{} need ring precision at least {}",
                j + 1,
                j + 1
            )));
        }
        self.check_norm_compatible(seq)?;
        for (n, x) in seq.elements.iter().enumerate() {
            if self.valuation(x) != Some(0) {
                return Err(Error::NotUnit(format!("x_{n}")));
            }
        }
        let mut f = seq.elements[2 * j].residue.clone();
        for _ in 0..j {
            f = norm_operator_poly(&self.p, &f)?;
        }
        self.certify(f, 0, seq, j)
    }

    /// `Col_x = T^e Col_{x*}` for any norm-compatible sequence of nonzero elements.
    pub fn coleman_series(&self, seq: &NormCompatibleSequence, j: usize) -> Result<ColemanResult> {
        let (e, units) = self.factor_by_uniformizer(seq)?;
        let unit_part = self.coleman_recover(&units, j)?;
        let f = &unit_part.series * &Poly::monomial(self.ring.clone(), self.ring.one(), e as usize);
        self.certify(f, e, seq, j)
    }

    fn certify(&self, f: Poly<RingContext>, e: u64, seq: &NormCompatibleSequence, j: usize) -> Result<ColemanResult> {
        let k = j as u32 + 1;
        let mut congruences = Vec::new();
        for n in 0..=j {
            let value = self.element(n, &f)?;
            congruences.push(self.congruent(&value, &seq.elements[n], k)?);
        }
        let nf = norm_operator_poly(&self.p, &f)?;
        let norm_fixed = (&nf - &f).coeffs().iter().all(|c| self.ring.valuation(c).at_least(k));
        Ok(ColemanResult { series: f, e, j, congruences, norm_fixed })
    }
}

/// Levels `0..=m` of an element of `lim O_{K_n}` (norm maps as transition maps).
#[derive(Clone, Debug, PartialEq)]
pub struct NormCompatibleSequence {
    pub elements: Vec<TowerElement>,
}

impl NormCompatibleSequence {
    /// Parses `[[level-0 coeffs], [level-1 coeffs], ...]`.
    pub fn from_json(tower: &TowerContext, v: &Value) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Schema("\"elements\" must be an array of coefficient arrays".into()))?;
        let elements = items
            .iter()
            .enumerate()
            .map(|(n, item)| tower.element(n, &crate::json::parse_poly(tower.ring(), item)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(NormCompatibleSequence { elements })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.elements.iter().map(|x| poly_json(&x.residue)).collect())
    }
}

/// A recovered Coleman series with its certificate.
#[derive(Clone, Debug)]
pub struct ColemanResult {
    pub series: Poly<RingContext>,
    /// Power of `T` split off before recovering the unit part.
    pub e: u64,
    pub j: usize,
    /// `series(u_n) = x_n mod p^(j+1)` for `n = 0..=j`.
    pub congruences: Vec<bool>,
    /// `N_P(series) = series mod p^(j+1)`.
    pub norm_fixed: bool,
}

impl ColemanResult {
    pub fn certified(&self) -> bool {
        self.norm_fixed && self.congruences.iter().all(|&b| b)
    }

    /// Congruences hold modulo `p^certified_pi_precision`.
    pub fn certified_pi_precision(&self) -> usize {
        self.j + 1
    }

    pub fn to_json(&self) -> Value {
        let ring = self.series.ring();
        let coeffs: Vec<Value> = self
            .series
            .coeffs()
            .iter()
            .map(|c| Value::String(ring.signed_base_value(c).map(|v| v.to_string()).unwrap_or_else(|| ring.display(c))))
            .collect();
        json!({
            "series": coeffs,
            "e": self.e,
            "j": self.j,
            "certifiedPiPrecision": self.certified_pi_precision(),
            "congruences": self.congruences,
            "normFixed": self.norm_fixed,
        })
    }
}
