//! Lubin's logarithm `L_P` and power series commuting with `P`.
//!
//! All series here have exact rational coefficients; p-adic statements are
//! expressed through valuations of rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{format_rational, rational_valuation, Rationals};
use crate::series::TruncSeries;

type QSeries = TruncSeries<Rationals>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogMethod {
    Recursion,
    Product,
    Limit,
}

#[derive(Clone, Debug)]
pub struct LogarithmResult {
    pub series: QSeries,
    pub method: LogMethod,
    /// Smallest valuation among the coefficients of `L(P) - P'(0) L`; `None` if it vanishes.
    pub residual_valuation: Option<i64>,
    /// Per-coefficient p-adic precision; `None` for coefficients known exactly.
    pub precision: Vec<Option<i64>>,
}

impl LogarithmResult {
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<String> = self.series.coeffs().iter().map(format_rational).collect();
        json!({
            "method": self.method,
            "series": coeffs,
            "trunc": self.series.order(),
            "functionalEquationResidual": self.residual_valuation.map(|v| v.to_string()).unwrap_or_else(|| "exact".into()),
            "coefficientPrecision": self.precision.iter().map(|p| match p {
                Some(v) => Value::from(*v),
                None => Value::from("exact"),
            }).collect::<Vec<_>>(),
        })
    }
}

/// `P'(0)` after checking `P(0) = 0`, `P'(0) != 0` and `val_p(P'(0)) >= 1`.
fn multiplier(p_series: &QSeries, p: u64, n: usize) -> Result<BigRational> {
    if p_series.order() < n.max(1) {
        return Err(Error::InsufficientTruncation { needed: n.max(1) + 1, have: p_series.order() + 1 });
    }
    if !p_series.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let lambda = p_series.coeff(1).clone();
    match rational_valuation(&lambda, &BigInt::from(p)) {
        None => Err(Error::ZeroLinearTerm),
        Some(v) if v < 1 => Err(Error::UnitLinearTerm),
        Some(_) => Ok(lambda),
    }
}

/// `[T^m] P^k` for `k <= n`, `m <= n`.
fn power_table(p_series: &QSeries, n: usize) -> Vec<QSeries> {
    let pt = p_series.truncate(n);
    let mut pows = vec![TruncSeries::one(Rationals, n)];
    for k in 1..=n {
        let next = pows[k - 1].mul(&pt).expect("same ring");
        pows.push(next);
    }
    pows
}

fn min_valuation(s: &QSeries, p: u64) -> Option<i64> {
    let pb = BigInt::from(p);
    s.coeffs().iter().filter_map(|c| rational_valuation(c, &pb)).min()
}

/// Residual valuation of the functional equation `L(P) = P'(0) L`.
fn residual(l: &QSeries, p_series: &QSeries, lambda: &BigRational, p: u64) -> Result<Option<i64>> {
    let lhs = l.compose(p_series)?;
    let diff = lhs.sub(&l.scale(lambda).truncate(lhs.order()))?;
    Ok(min_valuation(&diff, p))
}

/// `L_P mod T^(N+1)` from `c_m (P'(0) - P'(0)^m) = sum_{k<m} c_k [T^m] P^k`.
pub fn lubin_log_recursive(p_series: &QSeries, n: usize, p: u64) -> Result<LogarithmResult> {
    let lambda = multiplier(p_series, p, n)?;
    let pows = power_table(p_series, n);
    let mut c = vec![BigRational::zero(); n + 1];
    if n >= 1 {
        c[1] = BigRational::one();
    }
    let mut lam_m = lambda.clone();
    for m in 2..=n {
        lam_m *= &lambda;
        let rhs = (1..m).fold(BigRational::zero(), |acc, k| acc + &c[k] * pows[k].coeff(m));
        c[m] = rhs / (&lambda - &lam_m);
    }
    let series = TruncSeries::new(Rationals, c, n);
    let residual_valuation = residual(&series, &p_series.truncate(n), &lambda, p)?;
    Ok(LogarithmResult {
        series,
        method: LogMethod::Recursion,
        residual_valuation,
        precision: vec![None; n + 1],
    })
}

fn check_nonlinear(p_series: &QSeries, n: usize) -> Result<()> {
    if (2..=n.min(p_series.order())).all(|k| p_series.coeff(k).is_zero()) {
        return Err(Error::InvalidShape("P is linear modulo T^(N+1); the product does not converge".into()));
    }
    Ok(())
}

/// Partial products of `T prod_{n>=0} Q(P^(n)(T)) / Q(0)` with `P = T Q`, until a
/// factor changes the partial product by a multiple of `p^M` in every degree `<= N`.
///
/// The reported precision of each coefficient is the valuation of the last change.
pub fn lubin_log_product(p_series: &QSeries, n: usize, p: u64, m: u32, max_factors: usize) -> Result<LogarithmResult> {
    let lambda = multiplier(p_series, p, n)?;
    check_nonlinear(p_series, n)?;
    let pb = BigInt::from(p);
    let inv_q0 = lambda.recip();
    // Q(T) = P(T)/T to order n
    let q = TruncSeries::new(Rationals, p_series.coeffs()[1..].to_vec(), n);
    let pt = p_series.truncate(n);
    let mut partial = TruncSeries::x(Rationals, n);
    let mut iterate = TruncSeries::x(Rationals, n);
    for _ in 0..max_factors {
        let factor = q.compose(&iterate)?.scale(&inv_q0);
        let next = partial.mul(&factor)?;
        let change = next.sub(&partial)?;
        partial = next;
        iterate = pt.compose(&iterate)?;
        let vals: Vec<Option<i64>> = change.coeffs().iter().map(|c| rational_valuation(c, &pb)).collect();
        if vals.iter().all(|v| v.is_none_or(|v| v >= m as i64)) {
            let residual_valuation = residual(&partial, &pt, &lambda, p)?;
            let precision = vals.iter().map(|v| Some(v.unwrap_or(m as i64))).collect();
            return Ok(LogarithmResult { series: partial, method: LogMethod::Product, residual_valuation, precision });
        }
    }
    Err(Error::NoConvergence(max_factors))
}

/// `T prod_{n<count} Q(P^(n)(T)) / Q(0)`.
pub fn partial_product(p_series: &QSeries, n: usize, count: usize) -> Result<QSeries> {
    let lambda = multiplier_unchecked(p_series)?;
    let q = TruncSeries::new(Rationals, p_series.coeffs()[1..].to_vec(), n);
    let pt = p_series.truncate(n);
    let mut partial = TruncSeries::x(Rationals, n);
    let mut iterate = TruncSeries::x(Rationals, n);
    for _ in 0..count {
        partial = partial.mul(&q.compose(&iterate)?.scale(&lambda.recip()))?;
        iterate = pt.compose(&iterate)?;
    }
    Ok(partial)
}

fn multiplier_unchecked(p_series: &QSeries) -> Result<BigRational> {
    if p_series.order() < 1 || p_series.coeff(1).is_zero() {
        return Err(Error::ZeroLinearTerm);
    }
    Ok(p_series.coeff(1).clone())
}

/// `P^(k)(T) / P'(0)^k` for the first `k` at which consecutive terms agree modulo `p^M`.
pub fn lubin_log_limit(p_series: &QSeries, n: usize, p: u64, m: u32, max_iter: usize) -> Result<LogarithmResult> {
    let lambda = multiplier(p_series, p, n)?;
    check_nonlinear(p_series, n)?;
    let pb = BigInt::from(p);
    let pt = p_series.truncate(n);
    let mut iterate = TruncSeries::x(Rationals, n);
    let mut scale = BigRational::one();
    let mut prev = iterate.clone();
    for _ in 0..max_iter {
        iterate = pt.compose(&iterate)?;
        scale /= &lambda;
        let cur = iterate.scale(&scale);
        let change = cur.sub(&prev)?;
        prev = cur;
        let vals: Vec<Option<i64>> = change.coeffs().iter().map(|c| rational_valuation(c, &pb)).collect();
        if vals.iter().all(|v| v.is_none_or(|v| v >= m as i64)) {
            let residual_valuation = residual(&prev, &pt, &lambda, p)?;
            let precision = vals.iter().map(|v| Some(v.unwrap_or(m as i64))).collect();
            return Ok(LogarithmResult { series: prev, method: LogMethod::Limit, residual_valuation, precision });
        }
    }
    Err(Error::NoConvergence(max_iter))
}

/// The series commuting with `P`.
#[derive(Clone, Debug)]
pub struct CommutingSolution {
    pub series: QSeries,
    /// All coefficients lie in `Z_(p)`.
    pub integral: bool,
}

/// The unique `F = eta0 T + O(T^2)` over `Q` with `F(P) = P(F) mod T^(N+1)`.
pub fn solve_commuting(p_series: &QSeries, eta0: &BigRational, n: usize, p: u64) -> Result<CommutingSolution> {
    let lambda = multiplier(p_series, p, n)?;
    let pt = p_series.truncate(n);
    let pows = power_table(p_series, n);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    if n >= 1 {
        coeffs[1] = eta0.clone();
    }
    let mut lam_m = lambda.clone();
    for m in 2..=n {
        lam_m *= &lambda;
        let pf = pt.compose(&TruncSeries::new(Rationals, coeffs.clone(), n))?;
        let lower = (1..m).fold(BigRational::zero(), |acc, k| acc + &coeffs[k] * pows[k].coeff(m));
        coeffs[m] = (pf.coeff(m) - lower) / (&lam_m - &lambda);
    }
    let f = TruncSeries::new(Rationals, coeffs, n);
    let integral = f.is_p_integral(p);
    Ok(CommutingSolution { series: f, integral })
}

/// `f(g) = g(f) mod T^(N+1)`.
pub fn commutes(f: &QSeries, g: &QSeries, n: usize) -> Result<bool> {
    let f = f.truncate(n);
    let g = g.truncate(n);
    Ok(f.compose(&g)? == g.compose(&f)?)
}

/// `eta = F'(0)`.
pub fn eta_value(f: &QSeries) -> Result<BigRational> {
    if !f.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if f.order() == 0 {
        return Err(Error::InsufficientTruncation { needed: 2, have: 1 });
    }
    Ok(f.coeff(1).clone())
}

/// `L_P(F) = F'(0) L_P mod (T^(N+1), p^M)`; false when `F` does not commute with `P`.
pub fn log_equivariance(p_series: &QSeries, f: &QSeries, n: usize, p: u64, m: u32) -> Result<bool> {
    if !commutes(f, p_series, n)? {
        return Ok(false);
    }
    let l = lubin_log_recursive(p_series, n, p)?.series;
    let eta = eta_value(f)?;
    let lhs = l.compose(&f.truncate(n))?;
    let diff = lhs.sub(&l.scale(&eta))?;
    Ok(min_valuation(&diff, p).is_none_or(|v| v >= m as i64))
}

/// Whether `a` and `b` agree modulo `p^M` in every coefficient up to the smaller order.
pub fn congruent_mod(a: &QSeries, b: &QSeries, p: u64, m: u32) -> bool {
    let n = a.order().min(b.order());
    let diff = a.truncate(n).sub(&b.truncate(n)).expect("same ring");
    min_valuation(&diff, p).is_none_or(|v| v >= m as i64)
}
