use crate::error::{Error, Result};
use crate::padic::{PadicElement, RingContext, Valuation};
use crate::ring::CoeffRing;

/// Solves `a c + b phi(c) = e` for `c` by the contraction `c <- (e - b phi(c)) / a`.
///
/// Needs `val(a) < val(b)` and `val(e) >= val(a)`. The solution is unique and
/// known modulo `p^(M - val(a))`.
pub fn solve_phi_linear(
    ring: &RingContext,
    a: &PadicElement,
    b: &PadicElement,
    e: &PadicElement,
) -> Result<PadicElement> {
    let seed = ring.div(e, a).map_err(|_| not_divisible(ring, a, e))?;
    solve_phi_linear_from(ring, a, b, e, &seed)
}

/// Same as [`solve_phi_linear`], iterating from an arbitrary starting point.
pub fn solve_phi_linear_from(
    ring: &RingContext,
    a: &PadicElement,
    b: &PadicElement,
    e: &PadicElement,
    seed: &PadicElement,
) -> Result<PadicElement> {
    let va = ring.valuation(a).finite().ok_or(Error::ZeroElement)?;
    if let Valuation::Finite(vb) = ring.valuation(b) {
        if vb <= va {
            return Err(Error::NoContraction { va: va.to_string(), vb: vb.to_string() });
        }
    }
    if !ring.valuation(e).at_least(va) {
        return Err(not_divisible(ring, a, e));
    }
    let step = |c: &PadicElement| -> Result<PadicElement> {
        let rhs = ring.sub(e, &ring.mul(b, &ring.frobenius(c)));
        ring.div(&rhs, a)
    };
    let mut c = seed.clone();
    let mut converged = false;
    // each pass gains at least val(b) - val(a) >= 1 digits
    for _ in 0..(ring.precision() + 3) {
        let next = step(&c)?;
        let same = next.precision() == c.precision() && ring.is_zero(&ring.sub(&next, &c));
        c = next;
        if same {
            converged = true;
            break;
        }
    }
    let residual = ring.sub(&ring.add(&ring.mul(a, &c), &ring.mul(b, &ring.frobenius(&c))), e);
    if !converged || !ring.is_zero(&residual) {
        return Err(Error::PrecisionExhausted("phi-linear iteration did not settle".into()));
    }
    Ok(c)
}

fn not_divisible(ring: &RingContext, a: &PadicElement, e: &PadicElement) -> Error {
    Error::NotDivisible(format!("val(e) = {} < val(a) = {}", ring.valuation(e), ring.valuation(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn quad3(m: u32) -> RingContext {
        let ints: Vec<BigInt> = [-1, -1, 1].iter().map(|&x| BigInt::from(x)).collect();
        RingContext::new(3, m, &ints).unwrap()
    }

    #[test]
    fn zero_b_is_plain_division() {
        let r = quad3(8);
        let a = r.from_i64(3);
        let e = r.mul(&r.from_i64(6), &r.generator());
        let c = solve_phi_linear(&r, &a, &r.zero(), &e).unwrap();
        assert_eq!(c, r.truncate(&r.mul(&r.from_i64(2), &r.generator()), 7));
    }

    #[test]
    fn trivial_frobenius_closed_form() {
        let z3 = RingContext::base(3, 10).unwrap();
        let c = solve_phi_linear(&z3, &z3.from_i64(3), &z3.from_i64(27), &z3.from_i64(3)).unwrap();
        let tenth = z3.from_rational(&BigRational::new(1.into(), 10.into())).unwrap();
        assert!(z3.congruent(&c, &tenth, 9));
        assert_eq!(c.precision(), 9);
    }

    #[test]
    fn twisted_residual_and_uniqueness() {
        let r = quad3(10);
        let a = r.from_i64(3);
        let b = r.from_i64(9);
        let e = r.mul(&r.from_i64(3), &r.generator());
        let c = solve_phi_linear(&r, &a, &b, &e).unwrap();
        let residual = r.sub(&r.add(&r.mul(&a, &c), &r.mul(&b, &r.frobenius(&c))), &e);
        assert!(r.valuation(&residual).at_least(10));
        let other = solve_phi_linear_from(&r, &a, &b, &e, &r.from_i64(42)).unwrap();
        assert!(r.congruent(&c, &other, 9));
    }

    #[test]
    fn errors() {
        let z3 = RingContext::base(3, 6).unwrap();
        let three = z3.from_i64(3);
        assert!(matches!(
            solve_phi_linear(&z3, &three, &three, &three),
            Err(Error::NoContraction { .. })
        ));
        assert!(matches!(
            solve_phi_linear(&z3, &z3.from_i64(9), &z3.from_i64(81), &three),
            Err(Error::NotDivisible(_))
        ));
    }
}
