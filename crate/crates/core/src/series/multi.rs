use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::CoeffRing;
use crate::series::TruncSeries;

/// Power series in `nvars` variables known modulo total degree `order + 1`.
///
/// Storage is dense: every monomial of total degree `<= order` has an entry,
/// so zero coefficients keep their precision.
#[derive(Clone, Debug)]
pub struct MultiTrunc<R: CoeffRing> {
    ring: R,
    nvars: usize,
    order: usize,
    coeffs: BTreeMap<Vec<u32>, R::Elem>,
}

/// Two-variable series, as used for formal group laws `S(X, Y)`.
pub type BivariateTrunc<R> = MultiTrunc<R>;

impl<R: CoeffRing> PartialEq for MultiTrunc<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.nvars == other.nvars
            && self.order == other.order
            && self
                .coeffs
                .iter()
                .all(|(e, c)| self.ring.eq_elem(c, &other.coeffs[e]))
    }
}

/// All exponent vectors of length `nvars` and total degree `<= order`.
pub(crate) fn monomials(nvars: usize, order: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: usize, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget {
            prefix.push(k as u32);
            rec(prefix, left - 1, budget - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, order, &mut out);
    out
}

fn degree(e: &[u32]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

impl<R: CoeffRing> MultiTrunc<R> {
    pub fn zero(ring: R, nvars: usize, order: usize) -> Self {
        let z = ring.zero();
        let coeffs = monomials(nvars, order)
            .into_iter()
            .map(|e| (e, z.clone()))
            .collect();
        MultiTrunc { ring, nvars, order, coeffs }
    }

    pub fn constant(ring: R, nvars: usize, order: usize, c: R::Elem) -> Self {
        let mut s = Self::zero(ring, nvars, order);
        s.set(&vec![0; nvars], c);
        s
    }

    /// The `i`-th coordinate variable.
    pub fn var(ring: R, nvars: usize, order: usize, i: usize) -> Self {
        let one = ring.one();
        let mut s = Self::zero(ring, nvars, order);
        if order >= 1 {
            let mut e = vec![0; nvars];
            e[i] = 1;
            s.set(&e, one);
        }
        s
    }

    /// `f(X_i)` as a series in `nvars` variables.
    pub fn from_univariate(f: &TruncSeries<R>, nvars: usize, i: usize, order: usize) -> Self {
        let order = order.min(f.order());
        let mut s = Self::zero(f.ring().clone(), nvars, order);
        for (k, c) in f.coeffs().iter().enumerate().take(order + 1) {
            let mut e = vec![0; nvars];
            e[i] = k as u32;
            s.set(&e, c.clone());
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Total-degree truncation order.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of the monomial with exponents `e`; panics beyond the order.
    pub fn coeff(&self, e: &[u32]) -> &R::Elem {
        &self.coeffs[e]
    }

    pub fn set(&mut self, e: &[u32], c: R::Elem) {
        assert!(e.len() == self.nvars && degree(e) <= self.order, "monomial out of range");
        self.coeffs.insert(e.to_vec(), c);
    }

    /// `(exponents, coefficient)` pairs in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R::Elem)> {
        self.coeffs.iter()
    }

    /// Terms of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: usize) -> Vec<(Vec<u32>, R::Elem)> {
        self.coeffs
            .iter()
            .filter(|(e, _)| degree(e) == deg)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| degree(e) <= order)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MultiTrunc { ring: self.ring.clone(), nvars: self.nvars, order, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| self.ring.is_zero(c))
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ModeMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::InvalidShape(format!(
                "series in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.compatible(other)?;
        let order = self.order.min(other.order);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(e, _)| degree(e) <= order)
            .map(|(e, c)| (e.clone(), f(c, &other.coeffs[e])))
            .collect();
        Ok(MultiTrunc { ring: self.ring.clone(), nvars: self.nvars, order, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn map_coeffs(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        MultiTrunc {
            ring: self.ring.clone(),
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), f(c))).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| self.ring.neg(c))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map_coeffs(|a| self.ring.mul(a, c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let r = &self.ring;
        let order = self.order.min(other.order);
        let mut out = Self::zero(r.clone(), self.nvars, order);
        let rhs: Vec<(&Vec<u32>, usize, &R::Elem)> = other
            .coeffs
            .iter()
            .filter(|(_, c)| !r.is_exact_zero(c))
            .map(|(e, c)| (e, degree(e), c))
            .collect();
        let mut key = vec![0u32; self.nvars];
        for (ea, a) in &self.coeffs {
            let da = degree(ea);
            if da > order || r.is_exact_zero(a) {
                continue;
            }
            for &(eb, db, b) in &rhs {
                if da + db > order {
                    continue;
                }
                for (k, slot) in key.iter_mut().enumerate() {
                    *slot = ea[k] + eb[k];
                }
                let entry = out.coeffs.get_mut(&key).expect("dense storage");
                *entry = r.add(entry, &r.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::constant(self.ring.clone(), self.nvars, self.order, self.ring.one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitutes `args[i]` for the `i`-th variable. Every argument must have
    /// zero constant term; the result lives in the arguments' variables.
    pub fn substitute(&self, args: &[Self]) -> Result<Self> {
        if args.len() != self.nvars {
            return Err(Error::InvalidShape(format!(
                "{} arguments for a series in {} variables",
                args.len(),
                self.nvars
            )));
        }
        let first = args.first().ok_or_else(|| Error::InvalidShape("no arguments".into()))?;
        let r = &self.ring;
        for a in args {
            first.compatible(a)?;
            if *r != a.ring {
                return Err(Error::ModeMismatch);
            }
            if !r.is_zero(a.coeff(&vec![0; a.nvars])) {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        let order = args.iter().map(|a| a.order).min().unwrap_or(0).min(self.order);
        let args: Vec<Self> = args.iter().map(|a| a.truncate(order)).collect();
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(args.len());
        for a in &args {
            let mut pw = vec![Self::constant(r.clone(), a.nvars, order, r.one())];
            for k in 1..=order {
                let next = pw[k - 1].mul(a)?;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Self::zero(r.clone(), first.nvars, order);
        for (e, c) in &self.coeffs {
            if degree(e) > order || r.is_exact_zero(c) {
                continue;
            }
            let mut term = Self::constant(r.clone(), first.nvars, order, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Single-variable series as a [`TruncSeries`].
    pub fn to_univariate(&self) -> Result<TruncSeries<R>> {
        if self.nvars != 1 {
            return Err(Error::InvalidShape(format!("{} variables, expected 1", self.nvars)));
        }
        let c = (0..=self.order).map(|k| self.coeffs[&vec![k as u32]].clone()).collect();
        Ok(TruncSeries::new(self.ring.clone(), c, self.order))
    }

    /// Sets every variable except the first to zero.
    pub fn restrict_to_first(&self) -> TruncSeries<R> {
        let c = (0..=self.order)
            .map(|k| {
                let mut e = vec![0; self.nvars];
                e[0] = k as u32;
                self.coeffs[&e].clone()
            })
            .collect();
        TruncSeries::new(self.ring.clone(), c, self.order)
    }

    /// Exchanges variables `i` and `j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.swap(i, j);
                (e, c.clone())
            })
            .collect();
        MultiTrunc { ring: self.ring.clone(), nvars: self.nvars, order: self.order, coeffs }
    }

    /// Re-embeds a series in the first `nvars` of `total` variables.
    pub fn embed(&self, total: usize) -> Self {
        let mut out = Self::zero(self.ring.clone(), total, self.order);
        for (e, c) in &self.coeffs {
            let mut f = e.clone();
            f.resize(total, 0);
            out.set(&f, c.clone());
        }
        out
    }
}

impl<R: CoeffRing> TruncSeries<R> {
    /// `self(s)` for a multivariate `s` with zero constant term.
    pub fn compose_multi(&self, s: &MultiTrunc<R>) -> Result<MultiTrunc<R>> {
        MultiTrunc::from_univariate(self, 1, 0, self.order()).substitute(std::slice::from_ref(s))
    }

    /// `self(g)` through the multivariate substitution routine; used as a cross-check.
    pub fn compose_via_multi(&self, g: &TruncSeries<R>) -> Result<TruncSeries<R>> {
        let g = MultiTrunc::from_univariate(g, 1, 0, g.order());
        self.compose_multi(&g)?.to_univariate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Rationals;

    fn xy(order: usize) -> (MultiTrunc<Rationals>, MultiTrunc<Rationals>) {
        (
            MultiTrunc::var(Rationals, 2, order, 0),
            MultiTrunc::var(Rationals, 2, order, 1),
        )
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2, 3).len(), 10);
        assert_eq!(monomials(3, 9).len(), 220);
    }

    #[test]
    fn arithmetic_and_truncation() {
        let (x, y) = xy(3);
        let s = x.add(&y).unwrap();
        let cube = s.pow(3).unwrap();
        assert_eq!(*cube.coeff(&[1, 2]), Rationals.from_i64(3));
        let fourth = s.pow(4).unwrap();
        assert!(fourth.is_zero());
        assert_eq!(fourth.order(), 3);
        assert_eq!(s.swap_vars(0, 1), s);
        assert_eq!(s.homogeneous_part(1).len(), 2);
    }

    #[test]
    fn substitution() {
        let (x, y) = xy(4);
        // S = X + Y + XY, the multiplicative group law
        let s = x.add(&y).unwrap().add(&x.mul(&y).unwrap()).unwrap();
        assert_eq!(s.restrict_to_first(), TruncSeries::from_ints(Rationals, &[0, 1], 4));
        let z = MultiTrunc::var(Rationals, 3, 4, 2);
        let s3 = s.embed(3);
        let left = s.substitute(&[s3.clone(), z.clone()]).unwrap();
        let x3 = MultiTrunc::var(Rationals, 3, 4, 0);
        let yz = s.substitute(&[MultiTrunc::var(Rationals, 3, 4, 1), z]).unwrap();
        let right = s.substitute(&[x3, yz]).unwrap();
        assert_eq!(left, right);
        let bad = MultiTrunc::constant(Rationals, 2, 4, Rationals.one());
        assert_eq!(s.substitute(&[bad.clone(), bad]), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn univariate_agreement() {
        let f = TruncSeries::from_ints(Rationals, &[0, 9, 6, 1], 9);
        let g = TruncSeries::from_ints(Rationals, &[0, 4, 1], 9);
        assert_eq!(f.compose_via_multi(&g).unwrap(), f.compose(&g).unwrap());
    }
}
