//! Relative Lubin-Tate formal groups over an unramified extension `E` of `Q_p`.
//!
//! For `f = pi T + ... ` with `N_{E/F}(pi) = alpha` and `f = T^q mod p`, the
//! group law `S` is the unique series with `S^phi(f(X), f(Y)) = f(S(X, Y))`,
//! and `[a]` is the unique `aT + O(T^2)` with `f o [a] = [a]^phi o f`.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::JsonRing;
use crate::padic::{newton_polygon, solve_phi_linear, PadicElement, RingContext};
use crate::poly::Poly;
use crate::ring::CoeffRing;
use crate::series::{MultiTrunc, TruncSeries};

/// `prod_{i < h} phi^i(x)`, the norm from `E` down to `Q_p`.
pub fn norm_ef(ring: &RingContext, x: &PadicElement) -> Result<PadicElement> {
    ring.norm_to_base(x)
}

/// Whether `(f, alpha)` satisfies the defining conditions of `F_alpha`:
/// `f(0) = 0`, `f = T^q mod p`, `N(f'(0)) = alpha` and `val(alpha) = h`.
pub fn is_in_f_alpha(f: &TruncSeries<RingContext>, alpha: &PadicElement) -> bool {
    check_membership(f, alpha).is_ok()
}

fn check_membership(f: &TruncSeries<RingContext>, alpha: &PadicElement) -> Result<()> {
    let ring = f.ring();
    let bad = |msg: &str| Err(Error::InvalidShape(msg.to_string()));
    let q = ring.p() as usize;
    let h = ring.degree() as u32;
    if f.order() < q {
        return bad("f must be known past degree q");
    }
    if !ring.is_in_base(alpha) {
        return Err(Error::NotInBaseField);
    }
    if ring.valuation(alpha).finite() != Some(h) {
        return bad("val(alpha) must equal the degree of E");
    }
    if !ring.is_zero(f.coeff(0)) {
        return bad("f(0) must vanish");
    }
    for (i, c) in f.coeffs().iter().enumerate() {
        let target = if i == q { ring.one() } else { ring.zero() };
        if !ring.congruent(c, &target, 1) {
            return bad("f is not congruent to T^q modulo p");
        }
    }
    let norm = match norm_ef(ring, f.coeff(1)) {
        Ok(n) => n,
        Err(_) => return bad("N(f'(0)) is not in the base field"),
    };
    if !ring.congruent(&norm, alpha, ring.precision().min(alpha.precision())) {
        return bad("N(f'(0)) differs from alpha");
    }
    Ok(())
}

/// The data `(E, alpha, f)` with `f` in `F_alpha`.
#[derive(Clone, Debug)]
pub struct LubinTateData {
    ring: RingContext,
    alpha: PadicElement,
    f: TruncSeries<RingContext>,
}

impl LubinTateData {
    /// Validates `f` and `alpha` against the `F_alpha` conditions.
    pub fn new(f: TruncSeries<RingContext>, alpha: PadicElement) -> Result<Self> {
        check_membership(&f, &alpha)?;
        Ok(LubinTateData { ring: f.ring().clone(), alpha, f })
    }

    /// The canonical member `pi T + T^q`.
    pub fn canonical(ring: &RingContext, pi: PadicElement, order: usize) -> Result<Self> {
        let q = ring.p() as usize;
        let mut coeffs = vec![ring.zero(); order.max(q) + 1];
        coeffs[1] = pi.clone();
        coeffs[q] = ring.add(&coeffs[q], &ring.one());
        let f = TruncSeries::new(ring.clone(), coeffs, order.max(q));
        let alpha = norm_ef(ring, &pi)?;
        Self::new(f, alpha)
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn alpha(&self) -> &PadicElement {
        &self.alpha
    }

    pub fn f(&self) -> &TruncSeries<RingContext> {
        &self.f
    }

    pub fn pi(&self) -> &PadicElement {
        self.f.coeff(1)
    }

    /// `h = [E : F]`.
    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    /// Residue cardinality of the base field.
    pub fn q(&self) -> usize {
        self.ring.p() as usize
    }

    fn f_to(&self, n: usize) -> TruncSeries<RingContext> {
        if self.f.order() >= n {
            return self.f.truncate(n);
        }
        let mut c = self.f.coeffs().to_vec();
        c.resize(n + 1, self.ring.zero());
        TruncSeries::new(self.ring.clone(), c, n)
    }

    /// Whether `f(T)/T = pi + ... + T^(q-1)` has a single Newton slope `1/(q-1)`,
    /// so every nonzero root of `f` has valuation `1/(q-1)`.
    pub fn torsion_slope_check(&self) -> Result<bool> {
        let q = self.q();
        let g = Poly::new(self.ring.clone(), self.f.coeffs()[1..=q].to_vec());
        let np = newton_polygon(&g)?;
        let segs = &np.segments;
        Ok(np.zero_order == 0
            && segs.len() == 1
            && segs[0].length == q - 1
            && segs[0].slope == Ratio::new(1, q as i64 - 1))
    }

    fn to_json(&self) -> Value {
        json!({
            "E": self.ring.ring_json(),
            "alpha": self.ring.elem_json(&self.alpha),
            "f": self.f.to_json(),
        })
    }
}

/// A formal group law `S(X, Y)` modulo total degree `N + 1`.
#[derive(Clone, Debug)]
pub struct FormalGroup {
    data: LubinTateData,
    s: MultiTrunc<RingContext>,
    residual_zero: bool,
}

impl FormalGroup {
    pub fn data(&self) -> &LubinTateData {
        &self.data
    }

    pub fn law(&self) -> &MultiTrunc<RingContext> {
        &self.s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.s.order()
    }

    /// Whether the twisted identity held modulo total degree `N + 1` at the
    /// precision of the computed coefficients.
    pub fn certified(&self) -> bool {
        self.residual_zero
    }

    /// Smallest `p`-adic precision among the coefficients of `S`.
    pub fn precision(&self) -> u32 {
        multi_precision(&self.s)
    }

    /// `S(X, Y)` evaluated on two univariate series.
    pub fn apply(&self, a: &TruncSeries<RingContext>, b: &TruncSeries<RingContext>) -> Result<TruncSeries<RingContext>> {
        let n = a.order().min(b.order()).min(self.order());
        let args = [
            MultiTrunc::from_univariate(a, 1, 0, n),
            MultiTrunc::from_univariate(b, 1, 0, n),
        ];
        self.s.substitute(&args)?.to_univariate()
    }

    /// `{"E", "alpha", "f", "N", "S": [[i, j, c], ...]}` with the nonzero terms of `S`.
    pub fn to_json(&self) -> Value {
        let r = self.data.ring();
        let terms: Vec<Value> = self
            .s
            .terms()
            .filter(|(_, c)| !r.is_zero(c))
            .map(|(e, c)| json!([e[0], e[1], r.elem_json(c)]))
            .collect();
        let mut v = self.data.to_json();
        v["N"] = json!(self.order());
        v["S"] = Value::Array(terms);
        v["precision"] = json!(self.precision());
        v["certified"] = json!(self.residual_zero);
        v
    }
}

fn multi_precision(s: &MultiTrunc<RingContext>) -> u32 {
    s.terms().map(|(_, c)| c.precision()).min().unwrap_or(0)
}

fn multi_congruent(a: &MultiTrunc<RingContext>, b: &MultiTrunc<RingContext>, k: u32) -> bool {
    let r = a.ring();
    a.order() == b.order() && a.terms().all(|(e, c)| r.congruent(c, b.coeff(e), k))
}

fn series_all_zero(s: &MultiTrunc<RingContext>) -> bool {
    s.terms().all(|(_, c)| s.ring().is_zero(c))
}

/// `f(S) - S^phi(f(X), f(Y))` modulo total degree `N + 1`.
pub fn group_residual(data: &LubinTateData, s: &MultiTrunc<RingContext>) -> Result<MultiTrunc<RingContext>> {
    let n = s.order();
    let r = data.ring();
    let f = data.f_to(n);
    let lhs = f.compose_multi(s)?;
    let fx = MultiTrunc::from_univariate(&f, 2, 0, n);
    let fy = MultiTrunc::from_univariate(&f, 2, 1, n);
    let rhs = s.map_coeffs(|c| r.frobenius(c)).substitute(&[fx, fy])?;
    lhs.sub(&rhs)
}

/// Solves `pi c - pi^k phi(c) = -e`, failing when `e` is not divisible by `pi`.
fn twisted_solve(ring: &RingContext, pi: &PadicElement, pi_k: &PadicElement, e: &PadicElement, degree: usize) -> Result<PadicElement> {
    let vpi = ring.valuation(pi).finite().ok_or(Error::ZeroElement)?;
    if !ring.valuation(e).at_least(vpi) {
        return Err(Error::ObstructionNotDivisible { degree });
    }
    solve_phi_linear(ring, pi, &ring.neg(pi_k), &ring.neg(e))
}

/// Builds `S` degree by degree from `S_1 = X + Y`.
pub fn group_law(data: &LubinTateData, n: usize) -> Result<FormalGroup> {
    let r = data.ring().clone();
    let pi = data.pi().clone();
    let mut s = MultiTrunc::zero(r.clone(), 2, n);
    if n >= 1 {
        s.set(&[1, 0], r.one());
        s.set(&[0, 1], r.one());
    }
    for m in 2..=n {
        let err = group_residual(data, &s.truncate(m))?;
        let pi_m = r.pow(&pi, m as u64);
        for (e, c) in err.homogeneous_part(m) {
            let coef = twisted_solve(&r, &pi, &pi_m, &c, m)?;
            s.set(&e, coef);
        }
    }
    let residual_zero = series_all_zero(&group_residual(data, &s)?);
    Ok(FormalGroup { data: data.clone(), s, residual_zero })
}

/// `[a]`: the unique `aT + O(T^2)` with `f o [a] = [a]^phi o f` modulo `T^(N+1)`.
pub fn endomorphism(data: &LubinTateData, a: &PadicElement, n: usize) -> Result<TruncSeries<RingContext>> {
    let r = data.ring().clone();
    if !r.is_in_base(a) {
        return Err(Error::NotInBaseField);
    }
    let pi = data.pi().clone();
    let f = data.f_to(n);
    let mut g = TruncSeries::zero(r.clone(), n);
    if n == 0 {
        return Ok(g);
    }
    let mut coeffs = g.coeffs().to_vec();
    coeffs[1] = a.clone();
    g = TruncSeries::new(r.clone(), coeffs, n);
    for m in 2..=n {
        let lhs = f.compose(&g)?;
        let rhs = g.frobenius().compose(&f)?;
        let e = r.sub(lhs.coeff(m), rhs.coeff(m));
        let pi_m = r.pow(&pi, m as u64);
        let c = twisted_solve(&r, &pi, &pi_m, &e, m)?;
        let mut coeffs = g.coeffs().to_vec();
        coeffs[m] = c;
        g = TruncSeries::new(r.clone(), coeffs, n);
    }
    Ok(g)
}

/// `[a]` for a rational integer `a`.
pub fn endomorphism_int(data: &LubinTateData, a: i64, n: usize) -> Result<TruncSeries<RingContext>> {
    let a = data.ring().from_int(&BigInt::from(a));
    endomorphism(data, &a, n)
}

/// The inverse `iota` with `S(T, iota(T)) = 0` modulo `T^(N+1)`.
pub fn group_inverse(g: &FormalGroup) -> Result<TruncSeries<RingContext>> {
    let r = g.data().ring().clone();
    let n = g.order();
    let mut coeffs = vec![r.zero(); n + 1];
    if n >= 1 {
        coeffs[1] = r.neg(&r.one());
    }
    let t = TruncSeries::x(r.clone(), n);
    for m in 2..=n {
        let iota = TruncSeries::new(r.clone(), coeffs.clone(), n);
        let s = g.apply(&t, &iota)?;
        coeffs[m] = r.neg(s.coeff(m));
    }
    Ok(TruncSeries::new(r, coeffs, n))
}

/// `f^(phi^(h-1)) o ... o f^phi o f` modulo `T^(N+1)`.
pub fn iterate_twisted(data: &LubinTateData, n: usize) -> Result<TruncSeries<RingContext>> {
    let f = data.f_to(n);
    let mut acc = f.clone();
    let mut twisted = f;
    for _ in 1..data.degree() {
        twisted = twisted.frobenius();
        acc = twisted.compose(&acc)?;
    }
    Ok(acc)
}

/// One named check of [`verify_group_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    pub pass: bool,
}

/// Outcome of [`verify_group_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub precision: u32,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "precision": self.precision,
            "allPass": self.all_pass(),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass})).collect::<Vec<_>>(),
        })
    }
}

const HOM_PAIRS: [(i64, i64); 3] = [(1, 1), (2, -1), (2, 2)];

/// Checks the formal-group axioms and endomorphism laws modulo total degree
/// `N + 1` and `p^k`.
pub fn verify_group_axioms(g: &FormalGroup, k: u32) -> Result<AxiomReport> {
    let data = g.data();
    let r = data.ring().clone();
    let n = g.order();
    let s = g.law();
    let mut checks = Vec::new();
    let mut push = |name: String, pass: bool| checks.push(AxiomCheck { name, pass });

    let x = MultiTrunc::var(r.clone(), 1, n, 0);
    let zero = MultiTrunc::zero(r.clone(), 1, n);
    let sx0 = s.substitute(&[x.clone(), zero.clone()])?;
    let s0x = s.substitute(&[zero, x.clone()])?;
    push("identity".into(), multi_congruent(&sx0, &x, k) && multi_congruent(&s0x, &x, k));
    push("commutativity".into(), multi_congruent(s, &s.swap_vars(0, 1), k));

    let v = |i| MultiTrunc::var(r.clone(), 3, n, i);
    let s_xy = s.embed(3);
    let s_yz = s.substitute(&[v(1), v(2)])?;
    let left = s.substitute(&[s_xy, v(2)])?;
    let right = s.substitute(&[v(0), s_yz])?;
    push("associativity".into(), multi_congruent(&left, &right, k));

    let res = group_residual(data, s)?;
    push(
        "twisted identity".into(),
        res.terms().all(|(_, c)| r.valuation(c).at_least(k)),
    );

    let iota = group_inverse(g)?;
    let t = TruncSeries::x(r.clone(), n);
    let inv = g.apply(&t, &iota)?;
    push("inverse".into(), inv.congruent(&TruncSeries::zero(r.clone(), n), k));

    for &(a, b) in &HOM_PAIRS {
        let ea = endomorphism_int(data, a, n)?;
        let eb = endomorphism_int(data, b, n)?;
        let sum = endomorphism_int(data, a + b, n)?;
        let prod = endomorphism_int(data, a * b, n)?;
        push(format!("[{}] = S([{a}], [{b}])", a + b), g.apply(&ea, &eb)?.congruent(&sum, k));
        push(format!("[{}] = [{a}] o [{b}]", a * b), ea.compose(&eb)?.congruent(&prod, k));
    }

    let e2 = endomorphism_int(data, 2, n)?;
    let lhs = e2.compose_multi(s)?;
    let ex = MultiTrunc::from_univariate(&e2, 2, 0, n);
    let ey = MultiTrunc::from_univariate(&e2, 2, 1, n);
    let rhs = s.substitute(&[ex, ey])?;
    push("[2] in End(S)".into(), multi_congruent(&lhs, &rhs, k));

    Ok(AxiomReport { precision: k, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn z3(m: u32) -> RingContext {
        RingContext::base(3, m).unwrap()
    }

    fn ext(m: u32) -> RingContext {
        let modulus: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
        RingContext::new(3, m, &modulus).unwrap()
    }

    fn el(r: &RingContext, c: &[i64]) -> PadicElement {
        let c: Vec<BigInt> = c.iter().map(|&x| x.into()).collect();
        r.from_coeffs(&c).unwrap()
    }

    fn classical(m: u32, n: usize) -> LubinTateData {
        let r = z3(m);
        LubinTateData::new(TruncSeries::from_ints(r.clone(), &[0, 3, 0, 1], n), el(&r, &[3])).unwrap()
    }

    #[test]
    fn norms() {
        let r = ext(6);
        assert_eq!(r.base_value(&norm_ef(&r, &el(&r, &[3, 0])).unwrap()), Some(9.into()));
        let n = norm_ef(&r, &el(&r, &[0, 3])).unwrap();
        assert_eq!(r.signed_base_value(&n), Some((-9).into()));
        assert_eq!(r.base_value(&norm_ef(&r, &el(&r, &[5, 0])).unwrap()), Some(25.into()));
    }

    #[test]
    fn membership() {
        let r = z3(6);
        assert!(is_in_f_alpha(&TruncSeries::from_ints(r.clone(), &[0, 3, 0, 1], 5), &el(&r, &[3])));
        assert!(!is_in_f_alpha(&TruncSeries::from_ints(r.clone(), &[0, 3, 1], 5), &el(&r, &[3])));
        assert!(!is_in_f_alpha(&TruncSeries::from_ints(r.clone(), &[0, 3, 0, 1], 5), &el(&r, &[6])));
        let e = ext(6);
        let f = TruncSeries::new(e.clone(), vec![e.zero(), el(&e, &[0, 3]), e.zero(), e.one()], 3);
        assert!(is_in_f_alpha(&f, &el(&e, &[-9, 0])));
        assert!(!is_in_f_alpha(&f, &el(&e, &[9, 0])));
    }

    #[test]
    fn classical_group_law() {
        let data = classical(12, 9);
        assert!(data.torsion_slope_check().unwrap());
        let g = group_law(&data, 9).unwrap();
        assert!(g.certified());
        let r = data.ring();
        let eighth = r.from_rational(&BigRational::new(1.into(), 8.into())).unwrap();
        let s = g.law();
        assert!(r.congruent(s.coeff(&[2, 1]), &eighth, 6));
        assert!(r.congruent(s.coeff(&[1, 2]), &eighth, 6));
        assert!(r.is_zero(s.coeff(&[2, 0])));
        assert!(r.is_zero(s.coeff(&[1, 1])));
        assert!(g.precision() >= 6);
        let report = verify_group_axioms(&g, 6).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures());
    }

    #[test]
    fn classical_endomorphisms() {
        let data = classical(12, 9);
        let r = data.ring();
        let minus = endomorphism_int(&data, -1, 9).unwrap();
        let neg_t = TruncSeries::x(r.clone(), 9).neg();
        assert!(minus.congruent(&neg_t, 8));
        let three = endomorphism_int(&data, 3, 9).unwrap();
        assert!(three.congruent(&data.f().truncate(9), 8));
        assert!(endomorphism_int(&data, 1, 9).unwrap().congruent(&TruncSeries::x(r.clone(), 9), 8));
        let two = endomorphism_int(&data, 2, 9).unwrap();
        let four = endomorphism_int(&data, 4, 9).unwrap();
        assert!(two.compose(&two).unwrap().congruent(&four, 6));
        let g = group_law(&data, 9).unwrap();
        assert!(group_inverse(&g).unwrap().congruent(&neg_t, 6));
        assert!(iterate_twisted(&data, 9).unwrap().congruent(&three, 6));
    }

    #[test]
    fn unramified_quadratic() {
        let e = ext(12);
        let data = LubinTateData::canonical(&e, el(&e, &[0, 3]), 7).unwrap();
        assert_eq!(e.signed_base_value(data.alpha()), Some((-9).into()));
        assert!(data.torsion_slope_check().unwrap());
        let g = group_law(&data, 7).unwrap();
        assert!(g.certified());
        let comp = iterate_twisted(&data, 7).unwrap();
        assert_eq!(e.signed_base_value(comp.coeff(1)), Some((-9).into()));
        let alpha = endomorphism(&data, data.alpha(), 7).unwrap();
        assert!(comp.congruent(&alpha, 6));
        let report = verify_group_axioms(&g, 6).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures());
    }

    #[test]
    fn rejects_non_base_scalar() {
        let e = ext(8);
        let data = LubinTateData::canonical(&e, el(&e, &[0, 3]), 5).unwrap();
        assert_eq!(endomorphism(&data, &el(&e, &[0, 1]), 5), Err(Error::NotInBaseField));
    }

    #[test]
    fn obstruction_detected() {
        // the T^2 term puts f outside F_alpha
        let r = z3(8);
        let f = TruncSeries::from_ints(r.clone(), &[0, 3, 1, 1], 5);
        let bogus = LubinTateData { ring: r.clone(), alpha: el(&r, &[3]), f };
        assert!(matches!(group_law(&bogus, 5), Err(Error::ObstructionNotDivisible { .. })));
    }
}
