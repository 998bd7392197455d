use crate::error::{Error, Result};
use crate::padic::{PadicElement, RingContext, Valuation};
use crate::poly::Poly;
use crate::ring::CoeffRing;

/// Lifts an approximate root `x0` of `f` by Newton iteration.
///
/// Requires `val(f(x0)) > 2 val(f'(x0))`. The result is known modulo
/// `p^(M - val(f'(x0)))` and is congruent to `x0` modulo
/// `p^(val(f(x0)) - val(f'(x0)))`.
pub fn hensel_lift_root(f: &Poly<RingContext>, x0: &PadicElement) -> Result<PadicElement> {
    let r = f.ring();
    let df = f.derivative();
    let vd = r
        .valuation(&df.eval(x0))
        .finite()
        .ok_or(Error::HenselConditionFailed)?;
    let fx = f.eval(x0);
    let ok = match r.valuation(&fx) {
        Valuation::Finite(v) => v > 2 * vd,
        Valuation::AtLeast(k) => k > 2 * vd,
    };
    if !ok {
        return Err(Error::HenselConditionFailed);
    }
    let target = r.precision().saturating_sub(vd);
    if target == 0 {
        return Err(Error::PrecisionExhausted("f'(x0) has valuation >= M".into()));
    }
    let mut x = x0.clone();
    // quadratic convergence: log2(M) + 2 steps always suffice
    for _ in 0..(2 * r.precision() + 4) {
        let fx = f.eval(&x);
        if r.is_zero(&fx) {
            break;
        }
        let step = r.div(&fx, &df.eval(&x))?;
        if r.is_zero(&step) {
            break;
        }
        x = r.sub(&x, &step);
    }
    Ok(r.truncate(&x, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn sqrt2_mod_343() {
        let z7 = RingContext::base(7, 3).unwrap();
        let f = Poly::from_ints(z7.clone(), &[-2, 0, 1]);
        let root = hensel_lift_root(&f, &z7.from_i64(3)).unwrap();
        assert_eq!(z7.base_value(&root), Some(BigInt::from(108)));
        // independent residue check: 108^2 - 2 = 11662 = 34 * 343
        assert_eq!((108i64 * 108 - 2) % 343, 0);
        assert_eq!(root.precision(), 3);
    }

    #[test]
    fn linear_and_failure() {
        let z7 = RingContext::base(7, 3).unwrap();
        let f = Poly::from_ints(z7.clone(), &[-5, 1]);
        let root = hensel_lift_root(&f, &z7.from_i64(5)).unwrap();
        assert_eq!(z7.base_value(&root), Some(BigInt::from(5)));
        let z3 = RingContext::base(3, 5).unwrap();
        let g = Poly::from_ints(z3.clone(), &[-3, 0, 1]);
        assert_eq!(hensel_lift_root(&g, &z3.zero()), Err(Error::HenselConditionFailed));
    }

    #[test]
    fn lifts_from_residue_root() {
        let z3 = RingContext::base(3, 10).unwrap();
        // x^2 - 7 with x0 = 1: f(1) = -6 has valuation 1, f'(1) = 2 is a unit
        let g = Poly::from_ints(z3.clone(), &[-7, 0, 1]);
        let r = hensel_lift_root(&g, &z3.one()).unwrap();
        assert!(z3.is_zero(&g.eval(&r)));
        assert!(z3.congruent(&r, &z3.one(), 1));
        // (x - 3)(x - 30): f'(3) = -27, f(3) = 0 so the lift stays at 3 modulo 3^(10 - 3)
        let f = Poly::from_ints(z3.clone(), &[90, -33, 1]);
        let r = hensel_lift_root(&f, &z3.from_i64(3)).unwrap();
        assert_eq!(r.precision(), 7);
        assert!(z3.congruent(&r, &z3.from_i64(3), 7));
    }
}
