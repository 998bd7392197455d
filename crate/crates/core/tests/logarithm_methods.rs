use phiterate::dynamics::{congruent_mod, lubin_log_limit, lubin_log_product, lubin_log_recursive};
use phiterate::{Rationals, TruncSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random `P = T^p + p * (lower terms)` with `P(0) = 0` and `P'(0) != 0`.
fn random_admissible(rng: &mut ChaCha8Rng, p: i64, n: usize) -> TruncSeries<Rationals> {
    let mut c = vec![0i64; p as usize + 1];
    c[1] = p * (rng.gen_range(1..=2 * p) * if rng.gen_bool(0.5) { 1 } else { -1 });
    for k in 2..p as usize {
        c[k] = p * rng.gen_range(-3..=3);
    }
    c[p as usize] = 1;
    TruncSeries::from_ints(Rationals, &c, n)
}

fn methods_agree(p: i64, seed: u64) {
    let (n, m) = (10, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let ps = random_admissible(&mut rng, p, n);
        let rec = lubin_log_recursive(&ps, n, p as u64).unwrap();
        let prod = lubin_log_product(&ps, n, p as u64, m, 512).unwrap();
        let lim = lubin_log_limit(&ps, n, p as u64, m, 512).unwrap();
        assert!(congruent_mod(&prod.series, &rec.series, p as u64, m), "product, P = {:?}", ps.coeffs());
        assert!(congruent_mod(&lim.series, &rec.series, p as u64, m), "limit, P = {:?}", ps.coeffs());
    }
}

#[test]
fn recursion_product_and_limit_agree_over_z3() {
    methods_agree(3, 3);
}

#[test]
fn recursion_product_and_limit_agree_over_z5() {
    methods_agree(5, 5);
}
