use crate::error::{Error, Result};
use crate::padic::RingContext;
use crate::poly::Poly;
use crate::ring::CoeffRing;
use crate::series::TruncSeries;

/// Matrix of multiplication by `f` on the basis `1, T, ..., T^(d-1)` of
/// `O[T]` over `O[U]`, `U = P(T)`. Column `i` holds the coordinates of `f T^i`.
pub fn multiplication_matrix<R: CoeffRing>(p: &Poly<R>, f: &Poly<R>) -> Result<Vec<Vec<Poly<R>>>> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 || !p.is_monic() {
        return Err(Error::InvalidShape("P must be monic of positive degree".into()));
    }
    let ring = p.ring().clone();
    let zero = Poly::zero(ring.clone());
    // coordinates of f: the base-P digits, regrouped by power of T
    let mut col = vec![zero.clone(); d];
    for (k, digit) in f.expand_in_base(p)?.iter().enumerate() {
        for (r, c) in digit.coeffs().iter().enumerate() {
            col[r] = &col[r] + &Poly::monomial(ring.clone(), c.clone(), k);
        }
    }
    let u = Poly::x(ring.clone());
    let mut cols = vec![col];
    for _ in 1..d {
        let prev = cols.last().expect("nonempty");
        let top = &prev[d - 1];
        // T^d = U - a_{d-1} T^{d-1} - ... - a_0
        let mut next = vec![zero.clone(); d];
        for r in 0..d {
            let shifted = if r == 0 { zero.clone() } else { prev[r - 1].clone() };
            let carry = top.scale(&ring.neg(&p.coeff(r)));
            next[r] = &shifted + &carry;
        }
        next[0] = &next[0] + &(top * &u);
        cols.push(next);
    }
    // transpose into rows
    Ok((0..d).map(|r| (0..d).map(|i| cols[i][r].clone()).collect()).collect())
}

/// Determinant by Berkowitz's division-free algorithm.
pub fn berkowitz_det<R: CoeffRing>(a: &[Vec<Poly<R>>]) -> Poly<R> {
    let n = a.len();
    let ring = a[0][0].ring().clone();
    let one = Poly::one(ring.clone());
    let zero = Poly::zero(ring);
    let mut v = vec![one.clone(), -&a[0][0]];
    for r in 1..n {
        let row = &a[r][..r];
        let mut col: Vec<Poly<R>> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut t = Vec::with_capacity(r + 2);
        t.push(one.clone());
        t.push(-&a[r][r]);
        for _ in 0..r {
            let rc = row.iter().zip(&col).fold(zero.clone(), |acc, (x, y)| &acc + &(x * y));
            t.push(-&rc);
            col = (0..r)
                .map(|i| {
                    a[i][..r]
                        .iter()
                        .zip(&col)
                        .fold(zero.clone(), |acc, (x, y)| &acc + &(x * y))
                })
                .collect();
        }
        // lower-triangular Toeplitz matrix with first column t, times v
        let next: Vec<Poly<R>> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .fold(zero.clone(), |acc, k| &acc + &(&t[i - k] * &v[k]))
            })
            .collect();
        v = next;
    }
    let det = v[n].clone();
    if n % 2 == 1 {
        -&det
    } else {
        det
    }
}

/// `N_P(f)`: the polynomial in `U` with `N_P(f)(P(T)) = det(multiplication by f)`.
pub fn norm_operator_poly<R: CoeffRing>(p: &Poly<R>, f: &Poly<R>) -> Result<Poly<R>> {
    Ok(berkowitz_det(&multiplication_matrix(p, f)?))
}

/// `T_P(f)`: the trace of multiplication by `f`.
pub fn trace_operator_poly<R: CoeffRing>(p: &Poly<R>, f: &Poly<R>) -> Result<Poly<R>> {
    let m = multiplication_matrix(p, f)?;
    let zero = Poly::zero(p.ring().clone());
    Ok((0..m.len()).fold(zero, |acc, i| &acc + &m[i][i]))
}

/// Precision of the `U^m` coefficient of `N_P(f)` or `T_P(f)` when only `known`
/// terms of `f` are given: `ceil((known - d m - d + 1) / (d - 1))`, clamped at 0.
pub fn truncation_cap(known: usize, d: usize, m: usize) -> u32 {
    let num = known as i64 - (d * m + d) as i64 + 1;
    if num <= 0 {
        return 0;
    }
    if d == 1 {
        return u32::MAX;
    }
    let den = d as i64 - 1;
    ((num + den - 1) / den) as u32
}

fn truncated_apply(
    p: &Poly<RingContext>,
    f: &TruncSeries<RingContext>,
    n: usize,
    op: fn(&Poly<RingContext>, &Poly<RingContext>) -> Result<Poly<RingContext>>,
) -> Result<TruncSeries<RingContext>> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    let known = f.order() + 1;
    if known < d * n + 1 {
        return Err(Error::InsufficientTruncation { needed: d * n + 1, have: known });
    }
    let full = op(p, &f.to_poly())?;
    let ring = p.ring();
    let coeffs = (0..=n)
        .map(|m| ring.truncate(&full.coeff(m), truncation_cap(known, d, m)))
        .collect();
    Ok(TruncSeries::new(ring.clone(), coeffs, n))
}

/// `N_P(f) mod U^(n+1)` for a series known modulo `T^(order+1)`.
///
/// Needs at least `d n + 1` known terms. The coefficient of `U^m` is only
/// determined modulo `p^truncation_cap(known, d, m)` and carries that precision.
pub fn norm_operator(
    p: &Poly<RingContext>,
    f: &TruncSeries<RingContext>,
    n: usize,
) -> Result<TruncSeries<RingContext>> {
    truncated_apply(p, f, n, norm_operator_poly)
}

/// `T_P(f) mod U^(n+1)`, with the same precision rule as [`norm_operator`].
pub fn trace_operator(
    p: &Poly<RingContext>,
    f: &TruncSeries<RingContext>,
    n: usize,
) -> Result<TruncSeries<RingContext>> {
    truncated_apply(p, f, n, trace_operator_poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rationals;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn qp(c: &[i64]) -> Poly<Rationals> {
        Poly::from_ints(Rationals, c)
    }

    fn laplace(a: &[Vec<Poly<Rationals>>]) -> Poly<Rationals> {
        if a.len() == 1 {
            return a[0][0].clone();
        }
        let mut acc = qp(&[]);
        for j in 0..a.len() {
            let minor: Vec<Vec<_>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &a[0][j] * &laplace(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// `det f(C)` for the companion matrix `C` of `P(T) - c`, an integer matrix.
    fn companion_norm(p: &Poly<Rationals>, f: &Poly<Rationals>, c: i64) -> BigRational {
        let d = p.degree().unwrap();
        let mut shifted = p.coeffs().to_vec();
        shifted[0] -= BigRational::from_integer(c.into());
        let mut comp = vec![vec![BigRational::zero(); d]; d];
        for i in 1..d {
            comp[i][i - 1] = BigRational::from_integer(1.into());
        }
        for (i, row) in comp.iter_mut().enumerate() {
            row[d - 1] = -shifted[i].clone();
        }
        let matmul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| {
            (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).fold(BigRational::zero(), |s, k| s + &x[i][k] * &y[k][j]))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        };
        let mut acc = vec![vec![BigRational::zero(); d]; d];
        for coef in f.coeffs().iter().rev() {
            acc = matmul(&acc, &comp);
            for (i, row) in acc.iter_mut().enumerate() {
                row[i] += coef;
            }
        }
        let m: Vec<Vec<Poly<Rationals>>> = acc
            .into_iter()
            .map(|row| row.into_iter().map(|x| Poly::constant(Rationals, x)).collect())
            .collect();
        laplace(&m).coeff(0)
    }

    #[test]
    fn berkowitz_matches_laplace() {
        let p = qp(&[0, 5, 0, 0, 0, 1]);
        let f = qp(&[2, -1, 3, 0, 7, 1, 1, -4, 2]);
        let m = multiplication_matrix(&p, &f).unwrap();
        assert_eq!(berkowitz_det(&m), laplace(&m));
        let p3 = qp(&[0, 9, 6, 1]);
        let m = multiplication_matrix(&p3, &qp(&[1, 2, 3, 4, 5, 6, 7])).unwrap();
        assert_eq!(berkowitz_det(&m), laplace(&m));
    }

    #[test]
    fn norm_matches_companion_oracle() {
        let p3 = qp(&[0, 9, 6, 1]);
        let f = qp(&[1, 1, 0, 2, -1, 5]);
        let n = norm_operator_poly(&p3, &f).unwrap();
        assert!(n.degree().unwrap() <= 5);
        for c in -4..=4 {
            assert_eq!(n.eval(&BigRational::from_integer(c.into())), companion_norm(&p3, &f, c));
        }
    }

    #[test]
    fn worked_values() {
        let p3 = qp(&[0, 9, 6, 1]);
        assert_eq!(norm_operator_poly(&p3, &qp(&[0, 1])).unwrap(), qp(&[0, 1]));
        assert_eq!(norm_operator_poly(&p3, &qp(&[5])).unwrap(), qp(&[125]));
        // N_P(T - c) = U - P(c) for odd d
        assert_eq!(norm_operator_poly(&p3, &qp(&[4, 1])).unwrap(), qp(&[4, 1]));
        assert_eq!(norm_operator_poly(&p3, &qp(&[1, 1])).unwrap(), qp(&[4, 1]));
        assert_eq!(trace_operator_poly(&p3, &qp(&[0, 1])).unwrap(), qp(&[-6]));
        assert_eq!(trace_operator_poly(&p3, &qp(&[1])).unwrap(), qp(&[3]));
        let p2 = qp(&[0, 4, 1]);
        assert_eq!(norm_operator_poly(&p3, &p2).unwrap(), p2);
    }

    #[test]
    fn truncated_precision() {
        let z3 = RingContext::base(3, 8).unwrap();
        let p3 = Poly::from_ints(z3.clone(), &[0, 9, 6, 1]);
        let f = TruncSeries::from_ints(z3.clone(), &[1, 1], 40);
        let n = norm_operator(&p3, &f, 4).unwrap();
        assert_eq!(z3.base_value(n.coeff(0)), Some(4.into()));
        assert_eq!(z3.base_value(n.coeff(1)), Some(1.into()));
        assert!(z3.is_zero(n.coeff(2)));
        assert_eq!(n.coeff(0).precision(), 8);
        assert_eq!(n.coeff(4).precision(), 8);
        let short = norm_operator(&p3, &f.truncate(12), 4).unwrap();
        assert_eq!(short.coeff(0).precision(), 6);
        assert_eq!(short.coeff(3).precision(), 1);
        assert_eq!(short.coeff(4).precision(), 0);
        assert_eq!(truncation_cap(41, 3, 4), 14);
        assert_eq!(
            norm_operator(&p3, &f.truncate(10), 4),
            Err(Error::InsufficientTruncation { needed: 13, have: 11 })
        );
    }
}
