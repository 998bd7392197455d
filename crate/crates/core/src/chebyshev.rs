//! The Chebyshev example over `Q_3`: `P_k(T) = 2(C_k(T/2 + 1) - 1)`, which
//! commute with each other, have `P_k'(0) = k^2`, and realize the cyclotomic
//! tower through `u_n = zeta + zeta^(-1) - 2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::dynamics::{eta_value, log_equivariance};
use crate::error::{Error, Result};
use crate::json::poly_json;
use crate::poly::Poly;
use crate::ring::{CoeffRing, Rationals};
use crate::series::TruncSeries;
use crate::tower::TowerContext;

type QPoly = Poly<Rationals>;

/// `C_k` with `C_k(cos t) = cos(kt)`.
pub fn cheb_c(k: usize) -> QPoly {
    let t = Poly::x(Rationals);
    let two_t = t.scale(&BigRational::from_integer(2.into()));
    let (mut prev, mut cur) = (Poly::one(Rationals), t);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &(&two_t * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_k(T) = 2(C_k(T/2 + 1) - 1)`, monic of degree `k` with integer coefficients.
pub fn cheb_p(k: usize) -> Result<QPoly> {
    if k == 0 {
        return Err(Error::InvalidShape("P_k needs k >= 1".into()));
    }
    let half = BigRational::new(1.into(), 2.into());
    let inner = Poly::new(Rationals, vec![Rationals.one(), half]);
    let shifted = &cheb_c(k).compose(&inner) - &Poly::one(Rationals);
    Ok(shifted.scale(&BigRational::from_integer(2.into())))
}

/// `x^k P_k(x + 1/x - 2) = x^(2k) - 2x^k + 1`, the Laurent identity cleared of denominators.
fn laurent_exact(pk: &QPoly, k: usize) -> bool {
    let xt = Poly::from_ints(Rationals, &[1, -2, 1]);
    let mut lhs = Poly::zero(Rationals);
    for (i, c) in pk.coeffs().iter().enumerate() {
        let term = &xt.pow(i as u32) * &Poly::monomial(Rationals, c.clone(), k - i);
        lhs = &lhs + &term;
    }
    let rhs = &(&Poly::monomial(Rationals, Rationals.one(), 2 * k)
        - &Poly::monomial(Rationals, BigRational::from_integer(2.into()), k))
        + &Poly::one(Rationals);
    lhs == rhs
}

/// Arithmetic in `Z[x] / Phi_{3^(n+1)}`, `Phi = x^(2 3^n) + x^(3^n) + 1`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: usize,
    phi: QPoly,
    x_inv: QPoly,
}

impl Cyclotomic {
    pub fn new(n: usize) -> Self {
        let m = 3usize.pow(n as u32);
        let one = Rationals.one();
        let phi = &(&Poly::monomial(Rationals, one.clone(), 2 * m) + &Poly::monomial(Rationals, one.clone(), m))
            + &Poly::one(Rationals);
        // x^(3^(n+1)) = 1 in the quotient
        let x_inv = Poly::monomial(Rationals, one, 3 * m - 1).rem_monic(&phi).expect("monic");
        Cyclotomic { n, phi, x_inv }
    }

    pub fn modulus(&self) -> &QPoly {
        &self.phi
    }

    pub fn reduce(&self, f: &QPoly) -> QPoly {
        f.rem_monic(&self.phi).expect("monic")
    }

    /// `zeta^e` for a signed exponent, `zeta = x` of order `3^(n+1)`.
    pub fn zeta_pow(&self, e: i64) -> QPoly {
        let order = 3i64.pow(self.n as u32 + 1);
        let e = e.rem_euclid(order) as usize;
        self.reduce(&Poly::monomial(Rationals, Rationals.one(), e))
    }

    /// `u_m = zeta^(3^(n-m)) + zeta^(-3^(n-m)) - 2`, a root of `Q_m = P^(m) - u_0`.
    pub fn u(&self, m: usize) -> Result<QPoly> {
        if m > self.n {
            return Err(Error::TowerTooShallow { needed: m, have: self.n });
        }
        let s = 3i64.pow((self.n - m) as u32);
        let sum = &self.zeta_pow(s) + &self.zeta_pow(-s);
        Ok(&sum - &Poly::constant(Rationals, BigRational::from_integer(2.into())))
    }

    /// `f(a)` reduced modulo `Phi`.
    pub fn eval(&self, f: &QPoly, a: &QPoly) -> QPoly {
        let mut acc = Poly::zero(Rationals);
        for c in f.coeffs().iter().rev() {
            acc = self.reduce(&(&(&acc * a) + &Poly::constant(Rationals, c.clone())));
        }
        acc
    }

    /// `zeta^(-1)`, i.e. the inverse of `x` modulo `Phi`.
    pub fn x_inverse(&self) -> &QPoly {
        &self.x_inv
    }
}

/// Verifies `P_k(x + 1/x - 2) = x^k + x^(-k) - 2` exactly and in
/// `Z[x] / Phi_{3^(n+1)}`.
pub fn laurent_identity(k: usize, n: usize) -> Result<bool> {
    let pk = cheb_p(k)?;
    if !laurent_exact(&pk, k) {
        return Ok(false);
    }
    let cyc = Cyclotomic::new(n);
    let x = Poly::x(Rationals);
    let u = &(&x + cyc.x_inverse()) - &Poly::constant(Rationals, BigRational::from_integer(2.into()));
    let lhs = cyc.eval(&pk, &u);
    let rhs = &(&cyc.zeta_pow(k as i64) + &cyc.zeta_pow(-(k as i64)))
        - &Poly::constant(Rationals, BigRational::from_integer(2.into()));
    Ok(lhs == cyc.reduce(&rhs))
}

/// `u_0 = -3`, `P_3(u_(m+1)) = u_m` and `Q_m(u_m) = 0` in `Z[x] / Phi_{3^(n+1)}`.
pub fn cyclotomic_tower(n: usize) -> Result<bool> {
    let cyc = Cyclotomic::new(n);
    let p3 = cheb_p(3)?;
    let u0 = Poly::constant(Rationals, BigRational::from_integer((-3).into()));
    if cyc.u(0)? != u0 {
        return Ok(false);
    }
    let mut iterate = Poly::x(Rationals);
    for m in 0..=n {
        let um = cyc.u(m)?;
        if m < n && cyc.eval(&p3, &cyc.u(m + 1)?) != um {
            return Ok(false);
        }
        let q = &iterate - &u0;
        if !cyc.eval(&q, &um).is_zero() {
            return Ok(false);
        }
        iterate = p3.compose(&iterate);
    }
    Ok(true)
}

/// One lettered item of [`verify_chebyshev_example`].
#[derive(Clone, Debug)]
pub struct ReportItem {
    pub label: &'static str,
    pub claim: &'static str,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct ChebyshevReport {
    pub items: Vec<ReportItem>,
}

impl ChebyshevReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "allPass": self.all_pass(),
            "items": self.items.iter().map(|i| json!({
                "label": i.label,
                "claim": i.claim,
                "pass": i.pass,
                "detail": i.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Largest `k` used in the commutation and character checks.
pub const COMMUTATION_K_MAX: usize = 10;

/// Truncation order and `3`-adic precision of the logarithm equivariance check.
pub const EQUIVARIANCE_ORDER: usize = 7;
pub const EQUIVARIANCE_PRECISION: u32 = 5;

fn to_series(p: &QPoly, n: usize) -> TruncSeries<Rationals> {
    TruncSeries::from_poly(p, n)
}

/// Runs the checks (a)-(e) on the Chebyshev family.
///
/// `j` sets the Coleman congruences `mod 3^(j+1)`, the tower has
/// `max(depth, 2j)` levels and is computed at `precision` digits.
pub fn verify_chebyshev_example(j: usize, depth: usize, precision: u32) -> Result<ChebyshevReport> {
    let mut items = Vec::new();
    let p3 = cheb_p(3)?;
    let expected = Poly::from_ints(Rationals, &[0, 9, 6, 1]);
    items.push(ReportItem {
        label: "a",
        claim: "P_3 = T^3 + 6T^2 + 9T",
        pass: p3 == expected,
        detail: poly_json(&p3),
    });

    let mut commuting = Vec::new();
    let mut etas = Vec::new();
    for k in 1..=COMMUTATION_K_MAX {
        let pk = cheb_p(k)?;
        commuting.push(pk.compose(&p3) == p3.compose(&pk));
        etas.push(eta_value(&to_series(&pk, 1))?);
    }
    items.push(ReportItem {
        label: "b",
        claim: "P_k o P_3 = P_3 o P_k for k <= 10",
        pass: commuting.iter().all(|&b| b),
        detail: json!(commuting),
    });
    let eta_ok = etas
        .iter()
        .enumerate()
        .all(|(i, e)| *e == BigRational::from_integer(BigInt::from((i + 1) * (i + 1))));
    items.push(ReportItem {
        label: "c",
        claim: "eta(P_k) = P_k'(0) = k^2 for k <= 10",
        pass: eta_ok,
        detail: json!(etas.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
    });

    let levels = depth.max(2 * j);
    let tower = TowerContext::chebyshev(precision, levels)?;
    let ring = tower.ring().clone();
    let mut recoveries = Vec::new();
    let mut recover_ok = true;
    for target in [[0i64, 1, 0], [0, 4, 1]] {
        let f = Poly::from_ints(ring.clone(), &target);
        let seq = tower.sequence_from_poly(&f, levels)?;
        let col = tower.coleman_series(&seq, j)?;
        let diff = &col.series - &f;
        let matches = diff.coeffs().iter().all(|c| ring.valuation(c).at_least(j as u32 + 1));
        recover_ok &= matches && col.certified();
        recoveries.push(col.to_json());
    }
    items.push(ReportItem {
        label: "d",
        claim: "Coleman recovery returns T on (u_n) and T^2 + 4T on (P_2(u_n))",
        pass: recover_ok,
        detail: json!({"levels": levels, "results": recoveries}),
    });

    let p3s = to_series(&p3, EQUIVARIANCE_ORDER);
    let mut equiv = Vec::new();
    for k in [2usize, 3] {
        let pk = to_series(&cheb_p(k)?, EQUIVARIANCE_ORDER);
        equiv.push(log_equivariance(&p3s, &pk, EQUIVARIANCE_ORDER, 3, EQUIVARIANCE_PRECISION)?);
    }
    items.push(ReportItem {
        label: "e",
        claim: "L_P o P_k = k^2 L_P for k in {2, 3}",
        pass: equiv.iter().all(|&b| b),
        detail: json!({"k": [2, 3], "pass": equiv, "order": EQUIVARIANCE_ORDER, "precision": EQUIVARIANCE_PRECISION}),
    });
    Ok(ChebyshevReport { items })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(c: &[i64]) -> QPoly {
        Poly::from_ints(Rationals, c)
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(cheb_c(0), qp(&[1]));
        assert_eq!(cheb_c(1), qp(&[0, 1]));
        assert_eq!(cheb_c(2), qp(&[-1, 0, 2]));
        assert_eq!(cheb_p(1).unwrap(), qp(&[0, 1]));
        assert_eq!(cheb_p(2).unwrap(), qp(&[0, 4, 1]));
        assert_eq!(cheb_p(3).unwrap(), qp(&[0, 9, 6, 1]));
        assert!(cheb_p(0).is_err());
    }

    #[test]
    fn shifted_recurrence_oracle() {
        // P_(k+1) = (T + 2) P_k - P_(k-1) + 2T, P_0 = 0
        let t2 = qp(&[2, 1]);
        let two_t = qp(&[0, 2]);
        let (mut prev, mut cur) = (qp(&[]), qp(&[0, 1]));
        for k in 1..=20 {
            assert_eq!(cheb_p(k).unwrap(), cur);
            let next = &(&(&t2 * &cur) - &prev) + &two_t;
            prev = cur;
            cur = next;
        }
    }

    #[test]
    fn laurent() {
        for k in 1..=12 {
            assert!(laurent_identity(k, 1).unwrap(), "k = {k}");
        }
        assert!(laurent_identity(6, 2).unwrap());
        assert!(!laurent_exact(&qp(&[0, 9, 6, 2]), 3));
    }

    #[test]
    fn cyclotomic_realization() {
        let cyc = Cyclotomic::new(1);
        assert_eq!(cyc.u(0).unwrap(), qp(&[-3]));
        assert_eq!(cyc.eval(&cheb_p(3).unwrap(), &cyc.u(1).unwrap()), qp(&[-3]));
        for n in 0..=3 {
            assert!(cyclotomic_tower(n).unwrap());
        }
    }

    #[test]
    fn chebyshev_example_report() {
        let r = verify_chebyshev_example(2, 4, 8).unwrap();
        assert!(r.all_pass(), "{}", r.to_json());
        assert_eq!(r.items.len(), 5);
    }
}
