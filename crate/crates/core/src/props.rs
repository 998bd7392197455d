//! Seeded randomized property suites. Each property draws from its own
//! ChaCha8 stream, selected by its position in [`PROPERTIES`], so the report
//! for one property does not depend on which others run.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::dynamics::solve_commuting;
use crate::error::Result;
use crate::padic::{is_eisenstein, solve_phi_linear, solve_phi_linear_from, PadicElement, RingContext};
use crate::poly::Poly;
use crate::ring::{CoeffRing, Rationals};
use crate::series::TruncSeries;
use crate::tower::norm_operator_poly;

/// Ring precision used by the norm-operator suites.
pub const NORM_PRECISION: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropsReport {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl PropsReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.passed == p.cases)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<bool>;

/// Every property, in report order.
pub const PROPERTIES: &[(&str, Check)] = &[
    ("norm.z3.identity", |r| norm_identity(r, &z3_p())),
    ("norm.z3.congruent_mod_pi", |r| norm_mod_pi(r, &z3_p())),
    ("norm.z3.one_plus_pi_k", |r| norm_one_plus(r, &z3_p())),
    ("norm.z3.iterates", |r| norm_iterates(r, &z3_p())),
    ("norm.z5.identity", |r| norm_identity(r, &z5_p())),
    ("norm.z5.congruent_mod_pi", |r| norm_mod_pi(r, &z5_p())),
    ("norm.z5.one_plus_pi_k", |r| norm_one_plus(r, &z5_p())),
    ("norm.z5.iterates", |r| norm_iterates(r, &z5_p())),
    ("series.compose_associative", series_associative),
    ("series.reversion_inverse", series_reversion),
    ("padic.phi_linear_unique", phi_linear_unique),
    ("padic.eisenstein_iterates", eisenstein_iterates),
    ("dynamics.commuting_identity", commuting_identity),
];

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs `count` cases of each property whose name starts with one of
/// `filters` (all properties when `filters` is empty). `count = 0` gives an
/// empty report.
pub fn run_props(seed: u64, count: usize, filters: &[String]) -> Result<PropsReport> {
    let mut properties = Vec::new();
    if count == 0 {
        return Ok(PropsReport { seed, properties });
    }
    for (index, (name, check)) in PROPERTIES.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| name.starts_with(f.as_str())) {
            continue;
        }
        let mut rng = stream(seed, index);
        let mut passed = 0;
        for _ in 0..count {
            if check(&mut rng)? {
                passed += 1;
            }
        }
        properties.push(PropertyResult { name: name.to_string(), cases: count, passed });
    }
    Ok(PropsReport { seed, properties })
}

fn z3_p() -> Poly<RingContext> {
    let r = RingContext::base(3, NORM_PRECISION).expect("valid ring");
    Poly::from_ints(r, &[0, 9, 6, 1])
}

fn z5_p() -> Poly<RingContext> {
    let r = RingContext::base(5, NORM_PRECISION).expect("valid ring");
    Poly::from_ints(r, &[0, 5, 0, 0, 0, 1])
}

fn random_elem(rng: &mut ChaCha8Rng, r: &RingContext) -> PadicElement {
    let bound = r.p_pow(r.precision()).clone();
    let coeffs: Vec<BigInt> = (0..r.degree()).map(|_| random_below(rng, &bound)).collect();
    r.from_coeffs(&coeffs).expect("integral coefficients")
}

fn random_below(rng: &mut ChaCha8Rng, bound: &BigInt) -> BigInt {
    // bound <= p^M fits comfortably in u128 for the precisions used here
    let b: u128 = bound.try_into().expect("small modulus");
    BigInt::from(rng.gen_range(0..b))
}

fn random_poly(rng: &mut ChaCha8Rng, r: &RingContext, max_deg: usize) -> Poly<RingContext> {
    let deg = rng.gen_range(0..=max_deg);
    Poly::new(r.clone(), (0..=deg).map(|_| random_elem(rng, r)).collect())
}

fn random_unit_poly(rng: &mut ChaCha8Rng, r: &RingContext, max_deg: usize) -> Poly<RingContext> {
    loop {
        let f = random_poly(rng, r, max_deg);
        if r.valuation(&f.coeff(0)).finite() == Some(0) {
            return f;
        }
    }
}

fn poly_congruent(a: &Poly<RingContext>, b: &Poly<RingContext>, k: u32) -> bool {
    let r = a.ring();
    (a - b).coeffs().iter().all(|c| r.valuation(c).at_least(k))
}

fn norm_identity(rng: &mut ChaCha8Rng, p: &Poly<RingContext>) -> Result<bool> {
    let r = p.ring();
    let d = p.degree().expect("nonzero") as u64;
    let t = Poly::x(r.clone());
    let c = random_elem(rng, r);
    let nc = norm_operator_poly(p, &Poly::constant(r.clone(), c.clone()))?;
    Ok(norm_operator_poly(p, &t)? == t && nc == Poly::constant(r.clone(), r.pow(&c, d)))
}

fn norm_mod_pi(rng: &mut ChaCha8Rng, p: &Poly<RingContext>) -> Result<bool> {
    let f = random_poly(rng, p.ring(), 6);
    Ok(poly_congruent(&norm_operator_poly(p, &f)?, &f, 1))
}

fn norm_one_plus(rng: &mut ChaCha8Rng, p: &Poly<RingContext>) -> Result<bool> {
    let r = p.ring();
    let one = Poly::one(r.clone());
    for k in 1..=3u32 {
        let h = random_poly(rng, r, 5);
        let f = &one + &h.map_coeffs(|c| r.mul_p_pow(c, k));
        if !poly_congruent(&norm_operator_poly(p, &f)?, &one, k + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn norm_iterates(rng: &mut ChaCha8Rng, p: &Poly<RingContext>) -> Result<bool> {
    let f = random_unit_poly(rng, p.ring(), 4);
    let mut iterates = vec![f];
    for _ in 0..4 {
        let next = norm_operator_poly(p, iterates.last().expect("nonempty"))?;
        iterates.push(next);
    }
    for k in 0..=2usize {
        for m in 0..=2usize {
            if !poly_congruent(&iterates[m + k], &iterates[k], k as u32 + 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn random_small_series(rng: &mut ChaCha8Rng, n: usize, constant: bool) -> TruncSeries<Rationals> {
    let coeffs: Vec<BigRational> = (0..=n)
        .map(|i| {
            if i == 0 && !constant {
                return BigRational::from_integer(0.into());
            }
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=4);
            BigRational::new(num.into(), den.into())
        })
        .collect();
    TruncSeries::new(Rationals, coeffs, n)
}

fn series_associative(rng: &mut ChaCha8Rng) -> Result<bool> {
    let n = 6;
    let f = random_small_series(rng, n, true);
    let g = random_small_series(rng, n, false);
    let h = random_small_series(rng, n, false);
    Ok(f.compose(&g)?.compose(&h)? == f.compose(&g.compose(&h)?)?)
}

fn series_reversion(rng: &mut ChaCha8Rng) -> Result<bool> {
    let n = 7;
    let mut f = random_small_series(rng, n, false);
    if f.coeff(1) == &BigRational::from_integer(0.into()) {
        let mut c = f.coeffs().to_vec();
        c[1] = BigRational::from_integer(1.into());
        f = TruncSeries::new(Rationals, c, n);
    }
    let g = f.reversion()?;
    let t = TruncSeries::x(Rationals, n);
    Ok(f.compose(&g)? == t && g.compose(&f)? == t)
}

fn phi_linear_unique(rng: &mut ChaCha8Rng) -> Result<bool> {
    let modulus: Vec<BigInt> = [-1, -1, 1].iter().map(|&c| BigInt::from(c)).collect();
    let r = RingContext::new(3, 8, &modulus)?;
    let a = r.mul_p_pow(&r.one(), 1);
    let b = r.mul_p_pow(&random_elem(rng, &r), 2);
    let e = r.mul_p_pow(&random_elem(rng, &r), 1);
    let c1 = solve_phi_linear(&r, &a, &b, &e)?;
    let c2 = solve_phi_linear_from(&r, &a, &b, &e, &random_elem(rng, &r))?;
    let residual = r.sub(&r.add(&r.mul(&a, &c1), &r.mul(&b, &r.frobenius(&c1))), &e);
    Ok(r.is_zero(&residual) && r.congruent(&c1, &c2, c1.precision().min(c2.precision())))
}

fn eisenstein_iterates(rng: &mut ChaCha8Rng) -> Result<bool> {
    let r = RingContext::base(3, 8)?;
    let a1 = 3 * rng.gen_range(1..=8i64);
    let a2 = 3 * rng.gen_range(0..=8i64);
    let p = Poly::from_ints(r.clone(), &[0, a1, a2, 1]);
    let u0 = Poly::constant(r.clone(), r.from_i64(3 * rng.gen_range(1..=2i64)));
    let q1 = &p - &u0;
    let q2 = &p.compose(&p) - &u0;
    Ok(is_eisenstein(&q1)? && is_eisenstein(&q2)?)
}

fn commuting_identity(rng: &mut ChaCha8Rng) -> Result<bool> {
    let n = 8;
    let a1 = 3 * rng.gen_range(1..=5i64);
    let a2 = rng.gen_range(-6..=6i64);
    let p = TruncSeries::from_ints(Rationals, &[0, a1, a2, 1], n);
    let sol = solve_commuting(&p, &BigRational::from_integer(1.into()), n, 3)?;
    Ok(sol.series == TruncSeries::x(Rationals, n) && sol.integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cases_empty() {
        let r = run_props(1, 0, &[]).unwrap();
        assert!(r.properties.is_empty());
    }

    #[test]
    fn seeded_runs_repeat() {
        let f = vec!["norm.z3".to_string(), "series".to_string()];
        let a = run_props(7, 5, &f).unwrap();
        let b = run_props(7, 5, &f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.properties.len(), 6);
        assert!(a.all_pass(), "{:?}", a);
    }

    #[test]
    fn every_suite_passes_briefly() {
        let r = run_props(3, 3, &[]).unwrap();
        assert_eq!(r.properties.len(), PROPERTIES.len());
        assert!(r.all_pass(), "{:?}", r);
    }
}
