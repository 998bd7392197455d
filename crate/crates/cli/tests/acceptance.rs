//! Acceptance criteria 1-9. Each test prints one `criterion N: PASS|FAIL` line
//! and fails when the criterion (including its runtime bound) is not met.

use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use phiterate::chebyshev::{cheb_p, laurent_identity, Cyclotomic};
use phiterate::dynamics::{congruent_mod, log_equivariance, lubin_log_product, lubin_log_recursive, solve_commuting};
use phiterate::lubin_tate::{
    endomorphism, endomorphism_int, group_law, iterate_twisted, verify_group_axioms, LubinTateData,
};
use phiterate::padic::{is_eisenstein, newton_polygon};
use phiterate::props::{run_props, NORM_PRECISION};
use phiterate::tower::TowerContext;
use phiterate::{CoeffRing, Poly, Rationals, RingContext, TruncSeries};

fn report(n: u32, checks: &[(&str, bool)], elapsed: Duration, bound: Duration) {
    let in_time = elapsed <= bound;
    let pass = in_time && checks.iter().all(|(_, ok)| *ok);
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    println!(
        "criterion {n}: {} ({} checks, {:.2?} of {:?}){}",
        if pass { "PASS" } else { "FAIL" },
        checks.len(),
        elapsed,
        bound,
        if failed.is_empty() { String::new() } else { format!(" failed: {}", failed.join(", ")) }
    );
    assert!(failed.is_empty(), "criterion {n} failed: {failed:?}");
    assert!(in_time, "criterion {n} exceeded {bound:?}: {elapsed:?}");
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qpoly(c: &[i64]) -> Poly<Rationals> {
    Poly::from_ints(Rationals, c)
}

#[test]
fn criterion_1_chebyshev_exactness() {
    let start = Instant::now();
    let p3 = cheb_p(3).unwrap();
    let mut semigroup = true;
    for j in 1..=30usize {
        for k in 1..=30 / j {
            let (pj, pk, pjk) = (cheb_p(j).unwrap(), cheb_p(k).unwrap(), cheb_p(j * k).unwrap());
            semigroup &= pj.compose(&pk) == pjk && pk.compose(&pj) == pjk;
        }
    }
    let derivative = (1..=20i64).all(|k| cheb_p(k as usize).unwrap().coeff(1) == q(k * k, 1));
    report(
        1,
        &[
            ("P_3 = T^3 + 6T^2 + 9T", p3 == qpoly(&[0, 9, 6, 1])),
            ("P_j o P_k = P_jk for jk <= 30", semigroup),
            ("P_k'(0) = k^2 for k <= 20", derivative),
        ],
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_cyclotomic_witness() {
    let start = Instant::now();
    let laurent = (1..=12).all(|k| laurent_identity(k, 1).unwrap());
    let cyc = Cyclotomic::new(1);
    let u1 = cyc.u(1).unwrap();
    let image = cyc.eval(&cheb_p(3).unwrap(), &u1);
    report(
        2,
        &[
            ("Laurent identity for k <= 12", laurent),
            ("P(u_1) = -3 in Z[x]/Phi_9", image == qpoly(&[-3])),
        ],
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_3_norm_operator_suite() {
    let start = Instant::now();
    assert_eq!(NORM_PRECISION, 8);
    let r = run_props(1, 50, &["norm.".to_string()]).unwrap();
    let checks: Vec<(&str, bool)> = r
        .properties
        .iter()
        .map(|p| (p.name.as_str(), p.cases == 50 && p.passed == 50))
        .collect();
    let mut all = checks.clone();
    all.push(("eight properties ran", r.properties.len() == 8));
    report(3, &all, start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_4_coleman_recovery() {
    let start = Instant::now();
    let j = 3;
    let tower = TowerContext::chebyshev(8, 6).unwrap();
    let r = tower.ring().clone();
    let mut checks = Vec::new();
    for (name, target) in [("{u_n} gives T", [0i64, 1, 0]), ("{P_2(u_n)} gives T^2 + 4T", [0, 4, 1])] {
        let f = Poly::from_ints(r.clone(), &target);
        let seq = tower.sequence_from_poly(&f, 6).unwrap();
        let col = tower.coleman_series(&seq, j).unwrap();
        let diff = &col.series - &f;
        let matches = diff.coeffs().iter().all(|c| r.valuation(c).at_least(j as u32 + 1));
        checks.push((name, matches && col.certified_pi_precision() == j + 1));
        checks.push(("x_n = Col(u_n) mod 3^4 for n <= 3", col.congruences.len() == j + 1 && col.certified()));
    }
    report(4, &checks, start.elapsed(), Duration::from_secs(120));
}

#[test]
fn criterion_5_lubin_logarithm() {
    let start = Instant::now();
    let p = TruncSeries::from_ints(Rationals, &[0, 9, 6, 1], 9);
    let rec = lubin_log_recursive(&p, 9, 3).unwrap();
    let first = rec.series.coeff(1) == &q(1, 1) && rec.series.coeff(2) == &q(-1, 12) && rec.series.coeff(3) == &q(1, 90);
    let prod = lubin_log_product(&p, 9, 3, 6, 256).unwrap();
    let l = &rec.series;
    let lhs = l.compose(&p).unwrap();
    let rhs = l.scale(&q(9, 1));
    let equivariance = [2usize, 3].iter().all(|&k| {
        let pk = TruncSeries::from_poly(&cheb_p(k).unwrap(), 7);
        log_equivariance(&p.truncate(7), &pk, 7, 3, 5).unwrap()
    });
    report(
        5,
        &[
            ("T - T^2/12 + T^3/90", first),
            ("recursion = product mod (T^10, 3^6)", congruent_mod(&prod.series, l, 3, 6)),
            ("L o P = 9L mod (T^10, 3^6)", congruent_mod(&lhs, &rhs, 3, 6)),
            ("L o P_k = k^2 L for k in {2, 3} mod (T^8, 3^5)", equivariance),
        ],
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_commuting_solver() {
    let start = Instant::now();
    let p = TruncSeries::from_ints(Rationals, &[0, 9, 6, 1], 8);
    let sol = solve_commuting(&p, &q(4, 1), 8, 3).unwrap();
    let random = run_props(1, 10, &["dynamics.commuting_identity".to_string()]).unwrap();
    let r = &random.properties[0];
    report(
        6,
        &[
            ("solveCommuting(P_3, 4) = T^2 + 4T through degree 8", sol.series == TruncSeries::from_ints(Rationals, &[0, 4, 1], 8)),
            ("solveCommuting(P, 1) = T for 10 random P", r.cases == 10 && r.passed == 10),
        ],
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_7_relative_lubin_tate() {
    let start = Instant::now();
    let z3 = RingContext::base(3, 12).unwrap();
    let classical = LubinTateData::canonical(&z3, z3.from_i64(3), 9).unwrap();
    let g = group_law(&classical, 9).unwrap();
    let eighth = z3.from_rational(&q(1, 8)).unwrap();
    let s = g.law();
    let degree3 = z3.congruent(s.coeff(&[2, 1]), &eighth, 6)
        && z3.congruent(s.coeff(&[1, 2]), &eighth, 6)
        && z3.valuation(s.coeff(&[3, 0])).at_least(6)
        && z3.valuation(s.coeff(&[0, 3])).at_least(6)
        && [[2u32, 0], [1, 1], [0, 2]].iter().all(|e| z3.valuation(s.coeff(e)).at_least(6));
    let axioms = verify_group_axioms(&g, 6).unwrap();
    let three = endomorphism_int(&classical, 3, 9).unwrap();

    let modulus: Vec<num_bigint::BigInt> = [-1, -1, 1].iter().map(|&c| c.into()).collect();
    let e = RingContext::new(3, 12, &modulus).unwrap();
    let pi = e.from_coeffs(&[0.into(), 3.into()]).unwrap();
    let rel = LubinTateData::canonical(&e, pi, 7).unwrap();
    let alpha_is_minus_9 = e.signed_base_value(rel.alpha()) == Some((-9).into());
    let gr = group_law(&rel, 7).unwrap();
    let composite = iterate_twisted(&rel, 7).unwrap();
    let minus9 = endomorphism(&rel, &e.from_i64(-9), 7).unwrap();
    report(
        7,
        &[
            ("h = 1: S certified to total degree 9", g.certified() && g.precision() >= 6),
            ("h = 1: degree-3 term (X^2 Y + X Y^2)/8", degree3),
            ("h = 1: group axioms and [a] laws mod 3^6", axioms.all_pass()),
            ("h = 1: [3] = f", three.congruent(&classical.f().truncate(9), 6)),
            ("h = 2: alpha = -9", alpha_is_minus_9),
            ("h = 2: S^phi(f, f) = f(S) certified", gr.certified() && gr.precision() >= 6),
            ("h = 2: iterateTwisted = [-9] mod T^7", composite.congruent(&minus9, 6)),
        ],
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_8_newton_polygon() {
    let start = Instant::now();
    let z3 = RingContext::base(3, 8).unwrap();
    let p = Poly::from_ints(z3.clone(), &[0, 9, 6, 1]);
    let three = Poly::from_ints(z3.clone(), &[3]);
    let q1 = &p - &three;
    let np = newton_polygon(&q1).unwrap();
    let single = np.zero_order == 0
        && np.segments.len() == 1
        && np.segments[0].length == 3
        && np.segments[0].slope == num_rational::Ratio::new(1, 3);
    let q2 = &p.compose(&p) - &three;
    // the tower itself uses u_0 = -3
    let tower_q2 = &p.compose(&p) + &three;
    report(
        8,
        &[
            ("P - 3 has one slope 1/3 of length 3", single && is_eisenstein(&q1).unwrap()),
            ("P o P - 3 is Eisenstein of degree 9", q2.degree() == Some(9) && is_eisenstein(&q2).unwrap()),
            ("P o P + 3 is Eisenstein of degree 9", is_eisenstein(&tower_q2).unwrap()),
        ],
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_9_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_phiterate");
    let runs: &[&[&str]] = &[
        &["cheb", "--depth", "2", "--pi-precision", "3"],
        &["polygon", "--p", "3", "--poly", "[-3,9,6,1]"],
        &["log", "--order", "9", "--precision", "6"],
        &["coleman", "--poly", "[0,4,1]", "--depth", "4", "--pi-precision", "3"],
        &["ltgroup", "--order", "5", "--precision", "10"],
        &["ltgroup", "--modulus", "[-1,-1,1]", "--pi", "[0,3]", "--order", "5"],
        &["props", "--seed", "7", "--count", "5"],
    ];
    let mut checks = Vec::new();
    for args in runs {
        let a = Command::new(bin).args(*args).output().unwrap();
        let b = Command::new(bin).args(*args).output().unwrap();
        let ok = a.status.success() && a.status == b.status && a.stdout == b.stdout && !a.stdout.is_empty();
        checks.push((args[0], ok));
    }
    report(9, &checks, start.elapsed(), Duration::from_secs(120));
}
